import os

README = os.path.join(os.path.dirname(__file__), "..", "README.md")


def _readme() -> str:
    with open(README) as f:
        return f.read()


def test_readme_mentions_type_hints():
    """README should document type hint support."""
    content = _readme().lower()
    assert "type" in content or "typing" in content


def test_readme_mentions_py_typed():
    """README should mention py.typed marker."""
    assert "py.typed" in _readme()


def test_readme_documents_every_command():
    """Each registered command should appear in the README."""
    from persistlab.cli import cli

    content = _readme()
    for name in cli.commands:
        assert f"persistlab {name}" in content, name


def test_readme_documents_exit_codes():
    content = _readme()
    assert "Exit codes" in content
    assert "verification" in content.lower()
