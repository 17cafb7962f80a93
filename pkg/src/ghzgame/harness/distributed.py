"""Run a session as separate OS processes on loopback.

The calling process is the referee. It starts the device and the three agents
as child processes via the ``serve`` CLI subcommand, then plays the trials.
"""
from __future__ import annotations

import logging
import os
import subprocess
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

from ..game import ROBBERS
from .audit import DEVICE_FILE, REFEREE_FILE, AuditReport, agent_file, audit_session
from .config import SessionConfig
from .referee import SessionError, referee_run
from .stats import Stats, Transcript
from .wire import format_address, listen

log = logging.getLogger(__name__)

LOOPBACK = ("127.0.0.1", 0)
_SRC_ROOT = str(Path(__file__).resolve().parents[2])


@dataclass
class DistributedResult:
    stats: Stats
    transcripts: list[Transcript]
    capture_dir: str
    audit: AuditReport | None


def _child_env() -> dict[str, str]:
    env = dict(os.environ)
    env["PYTHONPATH"] = os.pathsep.join(p for p in (_SRC_ROOT, env.get("PYTHONPATH")) if p)
    return env


def _spawn(args: list[str], stderr_path: str) -> subprocess.Popen:
    cmd = [sys.executable, "-m", "ghzgame", *args]
    with open(stderr_path, "w") as err:
        return subprocess.Popen(cmd, stdout=subprocess.PIPE, stderr=err, text=True, env=_child_env())


def _start_device(config: SessionConfig, capture_dir: str) -> tuple[subprocess.Popen, tuple[str, int]]:
    address = config.endpoints.get("device", LOOPBACK)
    proc = _spawn([
        "serve", "device",
        "--endpoint", f"device={format_address(address)}",
        "--seed", str(config.seed),
        "--capture", os.path.join(capture_dir, DEVICE_FILE),
    ], os.path.join(capture_dir, "device.stderr"))
    line = proc.stdout.readline().strip()
    if not line.startswith("LISTENING "):
        proc.kill()
        raise RuntimeError(f"device failed to start: {line!r}; see {capture_dir}/device.stderr")
    host, _, port = line.split(" ", 1)[1].rpartition(":")
    return proc, (host, int(port))


def run_distributed(config: SessionConfig, audit: bool = True, timeout: float = 60.0) -> DistributedResult:
    capture_dir = config.capture_dir or tempfile.mkdtemp(prefix="ghzgame-")
    os.makedirs(capture_dir, exist_ok=True)
    srv = listen(config.endpoints.get("referee", LOOPBACK))
    referee_address = srv.getsockname()
    procs: list[subprocess.Popen] = []
    try:
        device_proc, device_address = _start_device(config, capture_dir)
        procs.append(device_proc)
        for r in ROBBERS:
            procs.append(_spawn([
                "serve", "agent",
                "--suspect", r.value,
                "--strategy", config.strategy_for(r).label,
                "--session", config.session,
                "--endpoint", f"device={format_address(device_address)}",
                "--endpoint", f"referee={format_address(referee_address)}",
                "--capture", os.path.join(capture_dir, agent_file(r.value)),
                "--timeout", str(config.agent_timeout),
            ], os.path.join(capture_dir, f"agent-{r.value}.stderr")))
        result = referee_run(config, srv, device_address, capture=os.path.join(capture_dir, REFEREE_FILE))
    finally:
        srv.close()
        for p in procs:
            try:
                p.wait(timeout=timeout)
            except subprocess.TimeoutExpired:
                log.warning("child %s did not exit; killing", p.args)
                p.kill()
                p.wait()
            if p.stdout is not None:
                p.stdout.close()
    report = audit_session(capture_dir, result.transcripts) if audit else None
    return DistributedResult(result.stats, result.transcripts, capture_dir, report)


__all__ = ["DistributedResult", "SessionError", "run_distributed"]
