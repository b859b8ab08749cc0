"""Plain-text region and string files.

Region files list one item per line; blank lines and ``#`` comments are
ignored.  An item is either an edge ``r c o`` (``o`` is ``h`` or ``v``) or a
shape:

    rect r0 c0 height width
    annulus r0 c0 outer thickness
    plaquette r c
    disk r c radius

The region is the union of all items.  :func:`write_region` emits sorted edge
lines only.

String files hold one domain per line, in circuit order (first line acts
first): ``plaquette r c``, ``disk r c radius`` or ``edges r c o; r c o; ...``.
"""

from pathlib import Path

from ..circuits import DomainString
from ..errors import ConfigurationError
from ..lattice import Lattice
from ..regions import Region, annulus, disk, plaquette, rectangle


def _ints(tokens, n, what, lineno):
    if len(tokens) != n:
        raise ConfigurationError(f"line {lineno}: {what} needs {n} integers")
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ConfigurationError(f"line {lineno}: {what} arguments must be integers") from None


def _edge(lattice: Lattice, tokens, lineno) -> int:
    if len(tokens) != 3 or tokens[2] not in ("h", "v"):
        raise ConfigurationError(f"line {lineno}: edge must read 'r c h' or 'r c v'")
    r, c = _ints(tokens[:2], 2, "edge", lineno)
    return lattice.edge_id(r, c, tokens[2])


def _shape(lattice: Lattice, tokens, lineno) -> Region:
    head, rest = tokens[0], tokens[1:]
    if head == "rect":
        return rectangle(lattice, *_ints(rest, 4, "rect", lineno))
    if head == "annulus":
        return annulus(lattice, *_ints(rest, 4, "annulus", lineno))
    if head == "plaquette":
        return plaquette(lattice, *_ints(rest, 2, "plaquette", lineno))
    if head == "disk":
        return disk(lattice, *_ints(rest, 3, "disk", lineno))
    if head == "edges":
        items = " ".join(rest).split(";")
        return Region.from_edges(lattice, [_edge(lattice, i.split(), lineno) for i in items if i.strip()])
    return Region.from_edges(lattice, [_edge(lattice, tokens, lineno)])


def _lines(text: str):
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_region(lattice: Lattice, text: str) -> Region:
    out = Region.empty(lattice)
    for lineno, tokens in _lines(text):
        out = out | _shape(lattice, tokens, lineno)
    return out


def read_region(lattice: Lattice, path) -> Region:
    return parse_region(lattice, _read(path))


def format_region(region: Region) -> str:
    return "".join(f"{r} {c} {o}\n" for r, c, o in sorted(region.triples()))


def write_region(region: Region, path) -> None:
    Path(path).write_text(format_region(region))


def parse_string(lattice: Lattice, text: str) -> DomainString:
    doms, labels = [], []
    for lineno, tokens in _lines(text):
        if tokens[0] not in ("plaquette", "disk", "edges"):
            raise ConfigurationError(
                f"line {lineno}: domain must start with plaquette, disk or edges")
        doms.append(_shape(lattice, tokens, lineno))
        labels.append(" ".join(tokens))
    return DomainString(lattice, doms, labels)


def read_string(lattice: Lattice, path) -> DomainString:
    return parse_string(lattice, _read(path))


def format_string(s: DomainString) -> str:
    out = []
    for i, x in enumerate(s.domains):
        if s.labels:
            out.append(s.labels[i])
        else:
            out.append("edges " + "; ".join(f"{r} {c} {o}" for r, c, o in sorted(x.triples())))
    return "".join(line + "\n" for line in out)


def write_string(s: DomainString, path) -> None:
    Path(path).write_text(format_string(s))


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read {path}: {exc}") from None
