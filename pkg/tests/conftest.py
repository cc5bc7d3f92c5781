import shutil
from pathlib import Path

import pytest

from smartdoc.config import Config
from smartdoc.engine import GenerationEngine, MockChatBackend
from smartdoc.graph import build_call_graph, build_index, resolve_call
from smartdoc.javasrc import parse_file, scan_project
from smartdoc.javasrc.model import SourceFile
from smartdoc.javasrc.parser import detect_package

FIXTURE_PROJECT = Path(__file__).parent / "fixtures" / "javaproj"

PROCESS = "com.acme.app.Pipeline#process/1"
TRANSFORM = "com.acme.app.Transformer#transform/1"
SCALE = "com.acme.app.MathKit#scale/1"
ABS = "com.acme.app.MathKit#abs/1"
CLAMP = "com.acme.app.Util#clamp/1"
TICK = "com.acme.app.Loop#tick/0"
TOCK = "com.acme.app.Loop#tock/0"

FIXTURE_SCHEDULE = (ABS, SCALE, CLAMP, TRANSFORM, TOCK, TICK, PROCESS)


@pytest.fixture(scope="session")
def fixture_root() -> Path:
    return FIXTURE_PROJECT


@pytest.fixture()
def parsed_project():
    sources, _ = scan_project(FIXTURE_PROJECT)
    return [parse_file(s) for s in sources]


@pytest.fixture()
def project_index(parsed_project):
    return build_index(parsed_project)


@pytest.fixture()
def call_graph(project_index):
    resolutions = [(s, resolve_call(s, project_index)) for s in project_index.call_sites]
    return build_call_graph(project_index, resolutions)


def analyze(files: dict[str, str]):
    """Parse an inline project given as {path: source}; returns (index, graph)."""
    results = []
    for path, text in sorted(files.items()):
        src = SourceFile(path=path, text=text, package_name=detect_package(text))
        results.append(parse_file(src))
    index = build_index(results)
    resolutions = [(s, resolve_call(s, index)) for s in index.call_sites]
    return index, build_call_graph(index, resolutions)


@pytest.fixture()
def build_project():
    return analyze


@pytest.fixture()
def make_engine():
    def _make(index, graph, backend=None, cache=None, **cfg_kwargs):
        backend = backend if backend is not None else MockChatBackend()
        config = Config(**cfg_kwargs)
        return GenerationEngine(index, graph, backend, config, cache=cache)
    return _make


@pytest.fixture()
def fixture_engine(project_index, call_graph, make_engine):
    return make_engine(project_index, call_graph)


@pytest.fixture()
def project_copy(tmp_path) -> Path:
    """Writable copy of the fixture project for patch-to-disk tests."""
    dest = tmp_path / "javaproj"
    shutil.copytree(FIXTURE_PROJECT, dest)
    return dest
