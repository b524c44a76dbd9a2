"""Multiport S-parameter interconnection by sub-network growth.

A :class:`Netlist` is a set of named devices, a list of port-to-port
connections, and an ordered list of external ports.  ``interconnect``
stacks every device matrix into one block-diagonal matrix and then
eliminates the connected port pairs one at a time.

Joining ports p and q of the composite matrix S (same reference impedance,
ideal junction) removes both ports and updates every remaining entry as

    D     = (1 - S_pq) * (1 - S_qp) - S_pp * S_qq
    S'_ij = S_ij + [ S_pj * S_iq * (1 - S_qp) + S_qj * S_ip * (1 - S_pq)
                     + S_pj * S_qq * S_ip     + S_qj * S_pp * S_iq ] / D

which is the standard self-connection reduction; connecting ports of two
different sub-blocks is the same formula applied to the block-diagonal
stack (the cross terms are then zero and D collapses to 1 - S_pp * S_qq).
The result does not depend on the elimination order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .errors import NetlistError, ResonantLoopError
from .sparams import ScatteringMatrix, DeviceModel

PortRef = tuple[str, int]  # (device name, 1-based port)

RESONANCE_TOL = 1e-12  # |D| below this means an exactly resonant ideal loop


@dataclass
class Netlist:
    """Devices, internal connections, and the ordered external ports."""

    devices: dict[str, DeviceModel] = field(default_factory=dict)
    connections: list[tuple[PortRef, PortRef]] = field(default_factory=list)
    external_ports: list[PortRef] = field(default_factory=list)

    def add(self, name: str, device: DeviceModel) -> None:
        if name in self.devices:
            raise NetlistError(f"duplicate device name {name!r}")
        self.devices[name] = device

    def connect(self, a: PortRef, b: PortRef) -> None:
        self.connections.append((tuple(a), tuple(b)))

    def expose(self, *ports: PortRef) -> None:
        self.external_ports.extend(tuple(p) for p in ports)

    def validate(self) -> None:
        """Check the wiring invariants; raises NetlistError on violation."""
        seen: dict[PortRef, str] = {}

        def claim(ref: PortRef, role: str) -> None:
            name, port = ref
            if name not in self.devices:
                raise NetlistError(f"connection names unknown device {name!r}")
            if not (1 <= port <= self.devices[name].n_ports):
                raise NetlistError(f"device {name!r} has no port {port}")
            if ref in seen:
                raise NetlistError(
                    f"port {name}.{port} used as {role} but already {seen[ref]}"
                )
            seen[ref] = role

        for a, b in self.connections:
            claim(a, "connected")
            claim(b, "connected")
        for ref in self.external_ports:
            claim(ref, "external")
        total = sum(d.n_ports for d in self.devices.values())
        if len(seen) != total:
            dangling = [
                f"{name}.{p}"
                for name, dev in self.devices.items()
                for p in range(1, dev.n_ports + 1)
                if (name, p) not in seen
            ]
            raise NetlistError(f"dangling ports: {', '.join(dangling)}")


def _eliminate_pair(s: np.ndarray, p: int, q: int, tag: str) -> np.ndarray:
    denom = (1.0 - s[p, q]) * (1.0 - s[q, p]) - s[p, p] * s[q, q]
    if abs(denom) < RESONANCE_TOL:
        raise ResonantLoopError(
            f"connection {tag} forms a resonant loop (|denominator| = {abs(denom):.3e})"
        )
    keep = [k for k in range(s.shape[0]) if k not in (p, q)]
    col_q = s[keep, q]
    col_p = s[keep, p]
    row_p = s[p, keep]
    row_q = s[q, keep]
    return s[np.ix_(keep, keep)] + (
        np.outer(col_q, row_p) * (1.0 - s[q, p])
        + np.outer(col_p, row_q) * (1.0 - s[p, q])
        + np.outer(col_p, row_p) * s[q, q]
        + np.outer(col_q, row_q) * s[p, p]
    ) / denom


def interconnect(net: Netlist, frequency: float) -> ScatteringMatrix:
    """S-matrix seen at the external ports, in their declared order."""
    net.validate()
    names = list(net.devices)
    blocks = {name: net.devices[name].at(frequency) for name in names}
    z_refs = {b.z_ref for b in blocks.values()}
    if len(z_refs) > 1:
        raise NetlistError(f"mixed reference impedances {sorted(z_refs)}")
    z_ref = z_refs.pop()

    offset = {}
    n_total = 0
    for name in names:
        offset[name] = n_total
        n_total += blocks[name].n_ports
    s = np.zeros((n_total, n_total), dtype=complex)
    for name in names:
        o = offset[name]
        n = blocks[name].n_ports
        s[o : o + n, o : o + n] = blocks[name].entries

    def gidx(ref: PortRef) -> int:
        return offset[ref[0]] + ref[1] - 1

    live = list(range(n_total))
    for a, b in net.connections:
        p, q = live.index(gidx(a)), live.index(gidx(b))
        tag = f"{a[0]}.{a[1]} <-> {b[0]}.{b[1]}"
        s = _eliminate_pair(s, p, q, tag)
        live = [k for k in live if k not in (gidx(a), gidx(b))]

    order = [live.index(gidx(ref)) for ref in net.external_ports]
    return ScatteringMatrix(s[np.ix_(order, order)], z_ref=z_ref)


@dataclass(frozen=True)
class ExcitationResult:
    """Output-port waves for a unit wave into one input, all ports matched."""

    input_port: int
    output_amplitudes: np.ndarray
    frequency: float


def excite(net: Netlist, input_port: int, frequency: float) -> ExcitationResult:
    """Array-port waves S(4+k, input) of an 8-port beamformer netlist."""
    n_ext = len(net.external_ports)
    n_out = n_ext - 4
    if n_out < 1:
        raise NetlistError("excite expects a netlist with 4 inputs plus outputs")
    if not (1 <= input_port <= 4):
        raise ValueError(f"input_port must be in 1..4, got {input_port}")
    s = interconnect(net, frequency)
    amplitudes = s.entries[4:, input_port - 1].copy()
    return ExcitationResult(
        input_port=input_port, output_amplitudes=amplitudes, frequency=frequency
    )


# --- JSON persistence -------------------------------------------------------
#
# Document layout (see schemas/netlist.schema.json):
#   {"devices": [{"name": ..., "kind": ..., "params": {...}}, ...],
#    "connections": [[["HA", 2], ["PSA", 1]], ...],
#    "external_ports": [["HA", 1], ...]}

def netlist_to_json(net: Netlist) -> str:
    doc = {
        "devices": [
            {"name": name, "kind": dev.kind, "params": dev.params}
            for name, dev in net.devices.items()
        ],
        "connections": [[list(a), list(b)] for a, b in net.connections],
        "external_ports": [list(p) for p in net.external_ports],
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def netlist_from_json(
    text: str, device_factory: Callable[[str, dict], DeviceModel]
) -> Netlist:
    """Rebuild a netlist; ``device_factory`` maps (kind, params) to a model."""
    doc = json.loads(text)
    net = Netlist()
    for entry in doc["devices"]:
        net.add(entry["name"], device_factory(entry["kind"], entry.get("params", {})))
    for a, b in doc["connections"]:
        net.connect((a[0], int(a[1])), (b[0], int(b[1])))
    net.expose(*[(p[0], int(p[1])) for p in doc["external_ports"]])
    net.validate()
    return net


def sweep(
    net: Netlist, frequencies: Iterable[float]
) -> list[tuple[float, ScatteringMatrix]]:
    """Evaluate the composite over a frequency list, ordered by frequency.

    Each point is an independent pure evaluation, so callers may fan the
    loop out over threads; results here are computed sequentially and
    returned sorted.
    """
    return [(f, interconnect(net, f)) for f in sorted(frequencies)]
