"""Replay captured traffic and check that no suspect could learn anything beyond its own exchange.

Every process writes a capture file (one JSON record per line sent or received).
The auditor checks, for each agent:

* every line it received from the referee is an ASK addressed to it, and the
  sequence equals exactly what the referee sent to it;
* every line it received from the device is an OUTCOME (or ERROR) for its own
  qubit, answering one of its own MEASUREs, and equals what the device sent it;
* at most one ASK and one OUTCOME per trial.

It also reads the order in which the device applied measurements in each trial
and tallies verdicts per order.
"""
from __future__ import annotations

import json
import os
from collections import Counter, defaultdict
from dataclasses import dataclass, field

from .stats import Transcript
from .wire import SUSPECT_ROLES, decode

REFEREE_FILE = "referee.jsonl"
DEVICE_FILE = "device.jsonl"


def agent_file(suspect: str) -> str:
    return f"agent-{suspect}.jsonl"


def read_capture(path: str) -> list[dict]:
    if not os.path.exists(path):
        return []
    with open(path, encoding="utf-8") as fh:
        records = [json.loads(line) for line in fh if line.strip()]
    return sorted(records, key=lambda r: r["seq"])


def _lines(records: list[dict], direction: str, peer: str) -> list[str]:
    return [r["line"] for r in records if r["dir"] == direction and r["peer"] == peer]


@dataclass
class AuditReport:
    violations: list[str] = field(default_factory=list)
    messages_checked: dict[str, int] = field(default_factory=dict)
    orders: Counter = field(default_factory=Counter)
    order_failures: Counter = field(default_factory=Counter)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": self.violations,
            "messages_checked": self.messages_checked,
            "orders": dict(self.orders),
            "order_failures": dict(self.order_failures),
        }


def audit_agent(suspect: str, agent: list[dict], referee: list[dict], device: list[dict]) -> list[str]:
    problems = []
    from_referee = _lines(agent, "in", "referee")
    from_device = _lines(agent, "in", "device")
    other = [r for r in agent if r["dir"] == "in" and r["peer"] not in ("referee", "device")]
    if other:
        problems.append(f"{suspect}: received traffic from unexpected peers {sorted({r['peer'] for r in other})}")

    asks = Counter()
    for line in from_referee:
        msg = decode(line)
        if msg["type"] != "ASK" or msg["suspect"] != suspect:
            problems.append(f"{suspect}: referee delivered foreign message {line}")
            continue
        asks[msg["trial"]] += 1
    problems += [f"{suspect}: {n} ASKs in trial {t}" for t, n in asks.items() if n > 1]
    if from_referee != _lines(referee, "out", suspect):
        problems.append(f"{suspect}: bytes received differ from what the referee sent to {suspect}")

    own_measures = {decode(l)["trial"] for l in _lines(device, "in", suspect) if decode(l)["type"] == "MEASURE"}
    outcomes = Counter()
    for line in from_device:
        msg = decode(line)
        if msg["type"] == "OUTCOME":
            if msg["suspect"] != suspect:
                problems.append(f"{suspect}: device delivered another qubit's outcome {line}")
            elif msg["trial"] not in own_measures:
                problems.append(f"{suspect}: unsolicited outcome {line}")
            outcomes[msg["trial"]] += 1
        elif msg["type"] == "ERROR":
            if msg.get("trial") is not None and msg["trial"] not in own_measures:
                problems.append(f"{suspect}: unsolicited error {line}")
        else:
            problems.append(f"{suspect}: device delivered {msg['type']}")
    problems += [f"{suspect}: {n} OUTCOMEs in trial {t}" for t, n in outcomes.items() if n > 1]
    if agent and device and from_device != _lines(device, "out", suspect):
        problems.append(f"{suspect}: bytes received differ from what the device sent to {suspect}")
    return problems


def measurement_orders(device: list[dict]) -> dict[int, str]:
    """Trial -> suspects in the order the device applied their measurements."""
    orders: dict[int, list[str]] = defaultdict(list)
    for r in device:
        if r["dir"] == "out":
            msg = decode(r["line"])
            if msg["type"] == "OUTCOME":
                orders[msg["trial"]].append(msg["suspect"])
    return {t: "".join(o) for t, o in orders.items()}


def audit_session(capture_dir: str, transcripts: list[Transcript] | None = None) -> AuditReport:
    report = AuditReport()
    referee = read_capture(os.path.join(capture_dir, REFEREE_FILE))
    device = read_capture(os.path.join(capture_dir, DEVICE_FILE))
    if not referee:
        report.violations.append("missing referee capture")
    for s in SUSPECT_ROLES:
        agent = read_capture(os.path.join(capture_dir, agent_file(s)))
        if not agent:
            report.violations.append(f"missing capture for agent {s}")
            continue
        report.messages_checked[s] = sum(1 for r in agent if r["dir"] == "in")
        report.violations += audit_agent(s, agent, referee, device)

    if transcripts is not None and device:
        orders = measurement_orders(device)
        for t in transcripts:
            if t.aborted or t.trial not in orders:
                continue
            order = orders[t.trial]
            report.orders[order] += 1
            if not t.verdict:
                report.order_failures[order] += 1
    return report
