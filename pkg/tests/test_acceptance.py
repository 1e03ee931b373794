"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

The checks themselves live in ``acceptance_report.py`` so that the
determinism criterion can rerun the whole report in fresh interpreters.
"""

import os
import subprocess
import sys
import time

import pytest

import acceptance_report as ar

HERE = os.path.dirname(os.path.abspath(__file__))
_lines = {}


def _emit(capsys, text):
    with capsys.disabled():
        sys.stdout.write("\n" + text + "\n")


@pytest.mark.slow
@pytest.mark.parametrize("n", sorted(ar.CRITERIA))
def test_criterion(n, capsys):
    title, fn, budget = ar.CRITERIA[n]
    t0 = time.perf_counter()
    ok, lines = fn()
    elapsed = time.perf_counter() - t0
    in_time = elapsed < budget
    _lines[n] = (ok, lines)
    verdict = "PASS" if ok and in_time else "FAIL"
    body = "\n".join(f"    {x}" for x in lines)
    _emit(capsys, f"criterion {n} ({title}): {verdict} [{elapsed:.1f}s, budget {budget}s]\n{body}")
    assert ok, lines
    assert in_time, f"{elapsed:.1f}s exceeds {budget}s"


@pytest.mark.slow
def test_criterion_8_determinism(capsys):
    env = dict(os.environ)
    procs = []
    for hashseed in ("0", "4242"):
        env_i = dict(env, PYTHONHASHSEED=hashseed)
        procs.append(subprocess.Popen(
            [sys.executable, os.path.join(HERE, "acceptance_report.py")],
            stdout=subprocess.PIPE, stderr=subprocess.PIPE, env=env_i,
        ))
    outs = []
    for p in procs:
        out, err = p.communicate(timeout=1800)
        assert p.returncode == 0, err.decode()
        outs.append(out)
    same = outs[0] == outs[1]
    # the in-process runs above must agree with the fresh ones too
    if _lines:
        text = outs[0].decode()
        for n, (ok, lines) in _lines.items():
            block = f"[{n}] {ar.CRITERIA[n][0]}: {'PASS' if ok else 'FAIL'}\n" + "".join(f"    {x}\n" for x in lines)
            same &= block in text
    _emit(capsys, f"criterion 8 (determinism): {'PASS' if same else 'FAIL'} "
                  f"[two runs, {len(outs[0])} bytes each, PYTHONHASHSEED 0 vs 4242]")
    assert same
