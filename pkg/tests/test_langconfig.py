import pytest

from crewlens.errors import ConfigError
from crewlens.langconfig import LanguageConfig, detect_language


@pytest.fixture
def config():
    return LanguageConfig()


def test_extension_lookup(config):
    assert detect_language("src/main.go", config) == "Go"
    assert detect_language("lib/deep/nested/app.RB", config) == "Ruby"


def test_markup_flagging(config):
    assert detect_language("README.md", config) == "Markdown"
    assert config.is_markup("Markdown")
    assert not config.is_markup("Go")
    assert not config.is_markup(None)


def test_no_extension_unmapped(config):
    assert detect_language("Makefile", config) is None


def test_basename_mapping():
    config = LanguageConfig(extensions={"makefile": "Makefile", "go": "Go"})
    assert detect_language("sub/Makefile", config) == "Makefile"


def test_final_extension_wins(config):
    assert detect_language("archive.tar.py", config) == "Python"


def test_keys_normalized():
    config = LanguageConfig(extensions={".PY": "Python"})
    assert config.extensions == {"py": "Python"}
    assert detect_language("a.py", config) == "Python"


def test_stub_email_patterns(config):
    assert config.is_stub_email("gitlab@localhost")
    assert config.is_stub_email("")
    assert config.is_stub_email("x@(none)")
    assert not config.is_stub_email("alice@example.com")


def test_stub_names(config):
    assert config.is_stub_name("root")
    assert config.is_stub_name("")
    assert not config.is_stub_name("Alice")


def test_from_mapping_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        LanguageConfig.from_mapping({"extensions": {}, "bogus": 1})


def test_from_file_roundtrip(tmp_path):
    p = tmp_path / "lang.yml"
    p.write_text("extensions: {foo: FooLang}\nmarkup: [FooLang]\n")
    config = LanguageConfig.from_file(p)
    assert detect_language("x.foo", config) == "FooLang"
    assert config.is_markup("FooLang")
