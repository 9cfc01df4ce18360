"""Merge Git signatures into contributor identities.

Non-stub names and emails form an undirected co-occurrence graph; connected
components become identities. Signatures whose name AND email are both stubs
stay out of the graph and become singleton identities, so their commits
remain countable as external noise.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field

from .langconfig import LanguageConfig
from .records import CommitRecord, signature_key

__all__ = ["Signature", "Identity", "is_stub", "merge_identities", "signatures_from_records"]


@dataclass(frozen=True)
class Signature:
    """A commit's (name, email) author pair; emails compare lowercased."""

    name: str
    email: str

    @classmethod
    def of(cls, name: str, email: str) -> "Signature":
        return cls(name=name.strip(), email=email.strip().lower())

    @property
    def key(self) -> str:
        return signature_key(self.name, self.email)


@dataclass
class Identity:
    """A merged contributor: the union of co-occurring names and emails."""

    id: int
    names: tuple[str, ...]
    emails: tuple[str, ...]
    stub: bool = False
    team: str | None = None

    @property
    def label(self) -> str:
        if self.names:
            return self.names[0]
        return self.emails[0] if self.emails else "(unknown)"


def is_stub(sig: Signature, config: LanguageConfig) -> tuple[bool, bool]:
    """(email_stub, name_stub) flags for one signature."""
    return config.is_stub_email(sig.email), config.is_stub_name(sig.name)


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict = {}

    def add(self, x) -> None:
        if x not in self.parent:
            self.parent[x] = x

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        self.add(a)
        self.add(b)
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def merge_identities(
    signatures: Iterable[Signature], config: LanguageConfig
) -> tuple[list[Identity], dict[str, int]]:
    """Connected-component merge; returns identities plus signature-key map.

    Identity ids are assigned in lexicographic order of each identity's
    smallest member string, so the partition is independent of input order.
    """
    uf = _UnionFind()
    singleton_pairs: set[tuple[str, str]] = set()
    sigs = [s if isinstance(s, Signature) else Signature.of(*s) for s in signatures]
    for sig in set(sigs):
        email_stub, name_stub = is_stub(sig, config)
        name_node = ("n", sig.name) if not name_stub else None
        email_node = ("e", sig.email) if not email_stub else None
        if name_node and email_node:
            uf.union(name_node, email_node)
        elif name_node:
            uf.add(name_node)
        elif email_node:
            uf.add(email_node)
        else:
            singleton_pairs.add((sig.name, sig.email))

    components: dict = {}
    for node in uf.parent:
        components.setdefault(uf.find(node), []).append(node)

    drafts: list[tuple[str, tuple[str, ...], tuple[str, ...], tuple[str, str] | None]] = []
    for members in components.values():
        names = tuple(sorted(v for kind, v in members if kind == "n"))
        emails = tuple(sorted(v for kind, v in members if kind == "e"))
        smallest = min(names + emails)
        drafts.append((smallest, names, emails, None))
    for name, email in singleton_pairs:
        names = (name,) if name else ()
        emails = (email,) if email else ()
        drafts.append((min(names + emails or ("",)), names, emails, (name, email)))

    drafts.sort(key=lambda d: (d[0], d[1], d[2]))
    identities = [
        Identity(id=i, names=names, emails=emails, stub=pair is not None)
        for i, (_, names, emails, pair) in enumerate(drafts)
    ]

    by_name = {}
    by_email = {}
    by_pair = {}
    for ident, (_, _, _, pair) in zip(identities, drafts):
        if pair is not None:
            by_pair[pair] = ident.id
            continue
        for n in ident.names:
            by_name[n] = ident.id
        for e in ident.emails:
            by_email[e] = ident.id

    key_to_id: dict[str, int] = {}
    for sig in sigs:
        email_stub, name_stub = is_stub(sig, config)
        if not name_stub:
            key_to_id[sig.key] = by_name[sig.name]
        elif not email_stub:
            key_to_id[sig.key] = by_email[sig.email]
        else:
            key_to_id[sig.key] = by_pair[(sig.name, sig.email)]
    return identities, key_to_id


def signatures_from_records(records: Iterable[CommitRecord]) -> list[Signature]:
    return [Signature.of(r.author_name, r.author_email) for r in records]
