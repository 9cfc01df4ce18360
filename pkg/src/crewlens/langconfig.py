"""Language detection config: extension map, markup set, signature stub lists."""

from __future__ import annotations

import fnmatch
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import ConfigError

__all__ = ["LanguageConfig", "detect_language"]

# Extension (no dot, lowercase) -> language. Covers the usual suspects; fully
# overridable through the config document.
DEFAULT_EXTENSIONS = {
    "py": "Python",
    "pyi": "Python",
    "rb": "Ruby",
    "rake": "Ruby",
    "go": "Go",
    "js": "JavaScript",
    "jsx": "JavaScript",
    "mjs": "JavaScript",
    "ts": "TypeScript",
    "tsx": "TypeScript",
    "vue": "Vue",
    "java": "Java",
    "c": "C",
    "h": "C",
    "cpp": "C++",
    "cc": "C++",
    "cxx": "C++",
    "hpp": "C++",
    "hh": "C++",
    "cs": "C#",
    "php": "PHP",
    "swift": "Swift",
    "kt": "Kotlin",
    "kts": "Kotlin",
    "rs": "Rust",
    "scala": "Scala",
    "m": "Objective-C",
    "mm": "Objective-C",
    "pl": "Perl",
    "pm": "Perl",
    "sh": "Shell",
    "bash": "Shell",
    "zsh": "Shell",
    "ps1": "PowerShell",
    "r": "R",
    "jl": "Julia",
    "lua": "Lua",
    "ex": "Elixir",
    "exs": "Elixir",
    "erl": "Erlang",
    "hrl": "Erlang",
    "hs": "Haskell",
    "clj": "Clojure",
    "cljs": "Clojure",
    "groovy": "Groovy",
    "dart": "Dart",
    "elm": "Elm",
    "ml": "OCaml",
    "mli": "OCaml",
    "f90": "Fortran",
    "f95": "Fortran",
    "nim": "Nim",
    "zig": "Zig",
    "sql": "SQL",
    "css": "CSS",
    "scss": "SCSS",
    "sass": "SCSS",
    "less": "Less",
    # markup / data formats
    "md": "Markdown",
    "markdown": "Markdown",
    "rst": "reStructuredText",
    "adoc": "AsciiDoc",
    "asciidoc": "AsciiDoc",
    "html": "HTML",
    "htm": "HTML",
    "xml": "XML",
    "txt": "Plain Text",
    "json": "JSON",
    "yaml": "YAML",
    "yml": "YAML",
    "toml": "TOML",
    "csv": "CSV",
}

DEFAULT_MARKUP = {
    "Markdown",
    "reStructuredText",
    "AsciiDoc",
    "HTML",
    "XML",
    "Plain Text",
    "JSON",
    "YAML",
    "TOML",
    "CSV",
}

DEFAULT_STUB_EMAILS = ["*@localhost", "*@(none)"]
DEFAULT_STUB_NAMES = {"root", "unknown", "admin", "ubuntu"}


def _normalize_ext(key: str) -> str:
    return key.lstrip(".").lower()


@dataclass
class LanguageConfig:
    """Extension map plus markup and signature-stub policy."""

    extensions: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_EXTENSIONS))
    markup: set[str] = field(default_factory=lambda: set(DEFAULT_MARKUP))
    stub_emails: list[str] = field(default_factory=lambda: list(DEFAULT_STUB_EMAILS))
    stub_names: set[str] = field(default_factory=lambda: set(DEFAULT_STUB_NAMES))

    def __post_init__(self) -> None:
        self.extensions = {_normalize_ext(k): v for k, v in self.extensions.items()}

    def is_markup(self, language: str | None) -> bool:
        return language is not None and language in self.markup

    def is_stub_email(self, email: str) -> bool:
        email = email.strip().lower()
        if not email:
            return True
        return any(fnmatch.fnmatchcase(email, pat) for pat in self.stub_emails)

    def is_stub_name(self, name: str) -> bool:
        name = name.strip()
        return not name or name in self.stub_names

    @classmethod
    def from_mapping(cls, doc: dict) -> "LanguageConfig":
        if not isinstance(doc, dict):
            raise ConfigError("language config must be a mapping")
        unknown = set(doc) - {"extensions", "markup", "stub_emails", "stub_names"}
        if unknown:
            raise ConfigError(f"unknown language config keys: {sorted(unknown)}")
        kwargs = {}
        if "extensions" in doc:
            kwargs["extensions"] = dict(doc["extensions"])
        if "markup" in doc:
            kwargs["markup"] = set(doc["markup"])
        if "stub_emails" in doc:
            kwargs["stub_emails"] = list(doc["stub_emails"])
        if "stub_names" in doc:
            kwargs["stub_names"] = set(doc["stub_names"])
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path: str | Path) -> "LanguageConfig":
        with open(path, encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
        return cls.from_mapping(doc or {})


def detect_language(path: str, config: LanguageConfig) -> str | None:
    """Language by lowercase final extension; extension-less files look up
    their full basename (so e.g. `makefile` can be mapped explicitly)."""
    name = path.rsplit("/", 1)[-1]
    if "." in name[1:]:
        key = name.rsplit(".", 1)[1].lower()
    else:
        key = name.lower()
    return config.extensions.get(key)
