from __future__ import annotations

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))


def pytest_addoption(parser):
    parser.addoption("--tier", default="default", choices=("default", "stretch"),
                     help="'stretch' also runs the long M11 / Sz(8) / PSU3(4) atlases")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--tier") == "stretch":
        return
    skip = pytest.mark.skip(reason="stretch tier; run with --tier stretch")
    for item in items:
        if "stretch" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
