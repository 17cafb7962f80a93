"""Newline-delimited JSON messages between referee, device and agents.

One UTF-8 JSON object per line. ``type`` names the variant; the remaining
required fields are listed in ``FIELDS``. Unknown fields are ignored by
receivers, which lets agents attach their basis and outcome to an ANSWER for
the referee's transcript.
"""
from __future__ import annotations

import json
import socket
import threading
import time
from typing import Any, TextIO

FIELDS: dict[str, tuple[str, ...]] = {
    "HELLO": ("role", "session"),
    "ASK": ("trial", "suspect", "side"),
    "MEASURE": ("trial", "suspect", "basis"),
    "OUTCOME": ("trial", "suspect", "sign"),
    "ANSWER": ("trial", "suspect", "color"),
    "VERDICT": ("trial", "guard", "consistent"),
    "ERROR": ("code", "detail"),
}

SUSPECT_ROLES = ("A", "B", "C")
ROLES = ("referee", "device") + SUSPECT_ROLES

# ERROR codes
DUP = "DUP"
ROLE = "ROLE"
TIMEOUT = "TIMEOUT"
BAD_MESSAGE = "BAD_MESSAGE"
SESSION = "SESSION"

Message = dict[str, Any]


class ProtocolError(ValueError):
    pass


def message(kind: str, **fields: Any) -> Message:
    msg = {"type": kind, **fields}
    validate(msg)
    return msg


def validate(msg: Message) -> Message:
    kind = msg.get("type")
    if kind not in FIELDS:
        raise ProtocolError(f"unknown message type {kind!r}")
    missing = [f for f in FIELDS[kind] if f not in msg]
    if missing:
        raise ProtocolError(f"{kind} missing fields {missing}")
    return msg


def encode(msg: Message) -> bytes:
    validate(msg)
    return (json.dumps(msg, separators=(",", ":"), sort_keys=True) + "\n").encode("utf-8")


def decode(line: bytes | str) -> Message:
    if isinstance(line, bytes):
        line = line.decode("utf-8")
    try:
        msg = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"not JSON: {line!r}") from exc
    if not isinstance(msg, dict):
        raise ProtocolError(f"not a JSON object: {line!r}")
    return validate(msg)


class Capture:
    """Append-only record of every line a process sends or receives."""

    def __init__(self, path: str | None):
        self._fh: TextIO | None = open(path, "a", encoding="utf-8") if path else None
        self._lock = threading.Lock()
        self._seq = 0

    def record(self, direction: str, peer: str, line: str) -> None:
        if self._fh is None:
            return
        with self._lock:
            entry = {"seq": self._seq, "dir": direction, "peer": peer, "line": line, "t": time.time()}
            self._seq += 1
            self._fh.write(json.dumps(entry) + "\n")
            self._fh.flush()

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None


class Channel:
    """A line-framed JSON connection to one peer."""

    def __init__(self, sock: socket.socket, peer: str = "?", capture: Capture | None = None):
        if sock.family in (socket.AF_INET, socket.AF_INET6):
            sock.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
        self.sock = sock
        self.peer = peer
        self.capture = capture
        self._buf = bytearray()
        self._send_lock = threading.Lock()

    @classmethod
    def connect(
        cls,
        address: tuple[str, int],
        peer: str,
        capture: Capture | None = None,
        timeout: float = 10.0,
    ) -> Channel:
        deadline = time.monotonic() + timeout
        while True:
            try:
                sock = socket.create_connection(address, timeout=timeout)
                sock.settimeout(None)
                return cls(sock, peer, capture)
            except OSError:
                if time.monotonic() >= deadline:
                    raise
                time.sleep(0.05)

    def send(self, msg: Message) -> None:
        data = encode(msg)
        with self._send_lock:
            if self.capture is not None:
                self.capture.record("out", self.peer, data.decode("utf-8").rstrip("\n"))
            self.sock.sendall(data)

    def recv(self, timeout: float | None = None) -> Message | None:
        """Next message; ``None`` on clean EOF. Raises ``TimeoutError`` if none arrives in time."""
        line = self.recv_line(timeout)
        return None if line is None else decode(line)

    def recv_line(self, timeout: float | None = None) -> str | None:
        deadline = None if timeout is None else time.monotonic() + timeout
        while b"\n" not in self._buf:
            if deadline is not None:
                remaining = deadline - time.monotonic()
                if remaining <= 0:
                    raise TimeoutError(f"no message from {self.peer} within {timeout}s")
                self.sock.settimeout(remaining)
            else:
                self.sock.settimeout(None)
            try:
                chunk = self.sock.recv(65536)
            except socket.timeout:
                raise TimeoutError(f"no message from {self.peer} within {timeout}s") from None
            if not chunk:
                return None
            self._buf.extend(chunk)
        raw, _, rest = bytes(self._buf).partition(b"\n")
        self._buf = bytearray(rest)
        line = raw.decode("utf-8")
        if self.capture is not None:
            self.capture.record("in", self.peer, line)
        return line

    def close(self) -> None:
        try:
            self.sock.shutdown(socket.SHUT_RDWR)
        except OSError:
            pass
        self.sock.close()


def listen(address: tuple[str, int], backlog: int = 8) -> socket.socket:
    srv = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    srv.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    srv.bind(address)
    srv.listen(backlog)
    return srv


def format_address(address: tuple[str, int]) -> str:
    return f"{address[0]}:{address[1]}"
