import subprocess
from pathlib import Path

import pytest

ALICE = ("Alice", "alice@x.com")
BOB = ("Bob", "bob@y.com")


class RepoBuilder:
    """Scripted test repositories with fixed authors and timestamps."""

    def __init__(self, root: Path):
        self.root = root
        self._git("init", "-q", "-b", "main")
        self._git("config", "user.name", "Test")
        self._git("config", "user.email", "test@example.com")
        self._git("config", "commit.gpgsign", "false")

    def _git(self, *args, env_extra=None, check=True):
        import os

        env = dict(os.environ)
        env.update(env_extra or {})
        return subprocess.run(
            ["git", "-C", str(self.root), *args],
            capture_output=True,
            check=check,
            env=env,
        )

    def write(self, path: str, lines):
        p = self.root / path
        p.parent.mkdir(parents=True, exist_ok=True)
        if isinstance(lines, bytes):
            p.write_bytes(lines)
        else:
            p.write_text("\n".join(lines) + ("\n" if lines else ""))

    def remove(self, path: str):
        self._git("rm", "-q", path)

    def commit(self, message: str, author, timestamp: int):
        name, email = author
        stamp = f"@{timestamp} +0000"
        self._git("add", "-A")
        self._git(
            "commit",
            "-q",
            "--allow-empty",
            "-m",
            message,
            f"--author={name} <{email}>",
            env_extra={
                "GIT_AUTHOR_DATE": stamp,
                "GIT_COMMITTER_DATE": stamp,
            },
        )
        return self.head()

    def merge(self, branch: str, author, timestamp: int):
        name, email = author
        stamp = f"@{timestamp} +0000"
        self._git(
            "merge",
            "-q",
            "--no-ff",
            "--no-edit",
            branch,
            env_extra={
                "GIT_AUTHOR_DATE": stamp,
                "GIT_COMMITTER_DATE": stamp,
                "GIT_AUTHOR_NAME": name,
                "GIT_AUTHOR_EMAIL": email,
            },
        )
        return self.head()

    def checkout(self, ref: str, create: bool = False):
        args = ["checkout", "-q"] + (["-b"] if create else []) + [ref]
        self._git(*args)

    def head(self) -> str:
        return self._git("rev-parse", "HEAD").stdout.decode().strip()


@pytest.fixture
def repo_builder(tmp_path):
    def make(name="repo"):
        root = tmp_path / name
        root.mkdir()
        return RepoBuilder(root)

    return make
