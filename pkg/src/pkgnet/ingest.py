"""Parsers for Debian ``Packages`` control files and FreeBSD ports ``INDEX`` files.

Both parsers are pure functions of their input and return a list of
:class:`PackageRecord` together with an :class:`IngestDiagnostics` describing
anything that was skipped or normalised along the way.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable


class SourceFormat(str, Enum):
    DEBIAN = "debian"
    BSD_INDEX = "bsd-index"


class AltPolicy(str, Enum):
    """How a Debian ``a | b`` alternative group is resolved."""

    FIRST = "first"
    ALL = "all"
    NONE = "none"


@dataclass(frozen=True)
class PackageRecord:
    name: str
    build_deps: tuple[str, ...] = ()
    run_deps: tuple[str, ...] = ()
    source_format: SourceFormat = SourceFormat.DEBIAN

    def __post_init__(self) -> None:
        if not is_valid_name(self.name):
            raise ValueError(f"invalid package name: {self.name!r}")
        for kind in ("build_deps", "run_deps"):
            deps = getattr(self, kind)
            if len(set(deps)) != len(deps):
                raise ValueError(f"{self.name}: duplicate entries in {kind}")
            if self.name in deps:
                raise ValueError(f"{self.name}: self-reference in {kind}")

    def deps(self, kind: str) -> tuple[str, ...]:
        if kind == "build":
            return self.build_deps
        if kind == "run":
            return self.run_deps
        raise ValueError(f"unknown dependency kind: {kind!r}")


@dataclass(frozen=True)
class MalformedLine:
    line: int
    reason: str


@dataclass
class IngestDiagnostics:
    stanza_count: int = 0
    dropped_self_refs: int = 0
    alternative_groups_seen: int = 0
    malformed_lines: list[MalformedLine] = field(default_factory=list)

    def skip(self, line: int, reason: str) -> None:
        self.malformed_lines.append(MalformedLine(line, reason))

    @property
    def clean(self) -> bool:
        return not self.malformed_lines


_WS = re.compile(r"\s")
_FIELD = re.compile(r"^([!-9;-~][!-9;-~]*):(.*)$")
# Strip "(>= 1.0)", "[i386 amd64]" and "<!nocheck>" decorations.
_DECORATION = re.compile(r"\([^)]*\)|\[[^\]]*\]|<[^>]*>")


def is_valid_name(name: str) -> bool:
    return bool(name) and "|" not in name and not _WS.search(name)


def _dedupe(owner: str, names: Iterable[str], diag: IngestDiagnostics) -> tuple[str, ...]:
    seen: dict[str, None] = {}
    for name in names:
        if name == owner:
            diag.dropped_self_refs += 1
            continue
        seen.setdefault(name, None)
    return tuple(seen)


def _decode_lines(text: str | bytes) -> list[tuple[str, bool]]:
    """Split input into ``(line, strictly_decoded)`` pairs."""
    if isinstance(text, str):
        return [(line, "�" not in line) for line in text.splitlines()]
    out = []
    for raw in text.splitlines():
        try:
            out.append((raw.decode("utf-8"), True))
        except UnicodeDecodeError:
            out.append((raw.decode("utf-8", errors="replace"), False))
    return out


def _alternative_name(alt: str) -> str:
    alt = _DECORATION.sub(" ", alt).strip()
    if not alt:
        return ""
    name = alt.split()[0]
    # "python3:any", "libc6:amd64"
    return name.split(":", 1)[0]


def parse_depends(value: str, alt_policy: AltPolicy | str, diag: IngestDiagnostics) -> list[str]:
    """Split a ``Depends:`` value into package names, resolving alternatives."""
    alt_policy = AltPolicy(alt_policy)
    names: list[str] = []
    for group in value.split(","):
        alts = [a for a in (_alternative_name(x) for x in group.split("|")) if a]
        if not alts:
            continue
        if len(alts) > 1:
            diag.alternative_groups_seen += 1
            if alt_policy is AltPolicy.NONE:
                continue
            if alt_policy is AltPolicy.FIRST:
                alts = alts[:1]
        names.extend(alts)
    return names


def _stanzas(lines: list[tuple[str, bool]]) -> Iterable[list[tuple[int, str, bool]]]:
    block: list[tuple[int, str, bool]] = []
    for lineno, (line, ok) in enumerate(lines, start=1):
        if not line.strip():
            if block:
                yield block
                block = []
            continue
        block.append((lineno, line, ok))
    if block:
        yield block


def parse_debian_packages(
    text: str | bytes,
    alt_policy: AltPolicy | str = AltPolicy.FIRST,
    include_pre_depends: bool = False,
) -> tuple[list[PackageRecord], IngestDiagnostics]:
    """Parse a Debian ``Packages`` file.

    Every stanza with a ``Package:`` field becomes one record whose
    ``run_deps`` come from ``Depends:`` (and ``Pre-Depends:`` first, when
    ``include_pre_depends`` is set). Version constraints and architecture
    qualifiers are stripped. A repeated package name replaces the earlier
    stanza and is reported as a malformed line.
    """
    alt_policy = AltPolicy(alt_policy)
    diag = IngestDiagnostics()
    records: dict[str, PackageRecord] = {}
    wanted = ["pre-depends", "depends"] if include_pre_depends else ["depends"]

    for block in _stanzas(_decode_lines(text)):
        diag.stanza_count += 1
        fields: dict[str, list] = {}
        current: str | None = None
        bad_stanza = False
        for lineno, line, ok in block:
            if line.startswith("#"):
                continue
            if line[0] in " \t":
                if current is None:
                    diag.skip(lineno, "continuation line without a field")
                    continue
                fields[current][1].append(line.strip())
                fields[current][2] = fields[current][2] and ok
                continue
            m = _FIELD.match(line)
            if not m:
                diag.skip(lineno, "line is not a 'Field: value' pair")
                current = None
                continue
            current = m.group(1).lower()
            fields[current] = [lineno, [m.group(2).strip()], ok]

        pkg = fields.get("package")
        start = block[0][0]
        if pkg is None:
            diag.skip(start, "stanza has no Package field")
            continue
        pkg_line, pkg_parts, pkg_ok = pkg
        name = " ".join(p for p in pkg_parts if p)
        if not pkg_ok or not is_valid_name(name):
            diag.skip(pkg_line, f"invalid Package field: {name!r}")
            continue
        for key in wanted:
            if key in fields and not fields[key][2]:
                diag.skip(fields[key][0], f"invalid UTF-8 in {key} field")
                bad_stanza = True
        if bad_stanza:
            continue

        deps: list[str] = []
        for key in wanted:
            if key in fields:
                deps.extend(parse_depends(" ".join(fields[key][1]), alt_policy, diag))
        if name in records:
            diag.skip(pkg_line, f"duplicate package {name!r}; later stanza wins")
        records[name] = PackageRecord(
            name=name,
            run_deps=_dedupe(name, deps, diag),
            source_format=SourceFormat.DEBIAN,
        )
    return list(records.values()), diag


def parse_bsd_index(text: str | bytes) -> tuple[list[PackageRecord], IngestDiagnostics]:
    """Parse a FreeBSD ports ``INDEX`` file.

    Fields are ``|``-separated; field 1 is the package name, field 8 the
    build dependencies and field 9 the run dependencies. Dependency tokens are
    kept verbatim. Lines with fewer than nine fields are skipped.
    """
    diag = IngestDiagnostics()
    records: dict[str, PackageRecord] = {}
    for lineno, (line, _ok) in enumerate(_decode_lines(text), start=1):
        if not line.strip():
            continue
        diag.stanza_count += 1
        parts = line.split("|")
        if len(parts) < 9:
            diag.skip(lineno, f"expected at least 9 fields, got {len(parts)}")
            continue
        name = parts[0].strip()
        if not is_valid_name(name):
            diag.skip(lineno, f"invalid package name: {name!r}")
            continue
        if name in records:
            diag.skip(lineno, f"duplicate package {name!r}; later line wins")
        records[name] = PackageRecord(
            name=name,
            build_deps=_dedupe(name, parts[7].split(), diag),
            run_deps=_dedupe(name, parts[8].split(), diag),
            source_format=SourceFormat.BSD_INDEX,
        )
    return list(records.values()), diag


def parse(text: str | bytes, fmt: SourceFormat | str, **kwargs) -> tuple[list[PackageRecord], IngestDiagnostics]:
    fmt = SourceFormat(fmt)
    if fmt is SourceFormat.DEBIAN:
        return parse_debian_packages(text, **kwargs)
    return parse_bsd_index(text)
