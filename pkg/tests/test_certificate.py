import copy
import dataclasses
import itertools
import json

import pytest

from collatz2d.certificate import (
    CertificateError,
    TheoremCertificate,
    diff,
    emit,
    parse_certificate,
    verify,
)
from conftest import certificate_of
from mutations import base_bounds, cycle_entries, derivation_coefficients, determinant_zeros


def test_round_trip(cl_cert, e6_cert):
    for cert in (cl_cert, e6_cert):
        js, _ = emit(cert)
        assert parse_certificate(js) == cert
        assert emit(parse_certificate(js))[0] == js


def test_cl_certificate_verifies(cl_cert):
    rep = verify(cl_cert)
    assert rep.ok, rep.discrepancy
    assert str(rep).startswith("PASS")
    assert verify(emit(cl_cert)[0]).ok


def test_cl_theorem_text(cl_cert):
    _, text = emit(cl_cert)
    assert "Status: FULL" in text
    assert "(-1), (1), (-3,-2,1,3,2,-1)" in text
    for case in ("Case Ia", "Case Ib", "Case IIa", "Case IIIa"):
        assert case in text


def test_e6_certificate(e6_cert):
    assert e6_cert.status == "FULL"
    assert verify(e6_cert).ok


def test_unbounded_text_shows_witness():
    cert = certificate_of("(1,1,1,1)")
    assert cert.label == "FAILED(bound-conjecture)"
    assert abs(int(cert.witness["value"])) > 10**6
    _, text = emit(cert)
    assert f"= {abs(int(cert.witness['value']))} > 10^6" in text
    assert verify(cert).ok


def test_fake_witness_rejected():
    cert = certificate_of("(1,1,1,1)")
    bad = dataclasses.replace(cert, witness=dict(cert.witness, value=str(int(cert.witness["value"]) + 1)))
    assert not verify(bad).ok


def test_diff(cl_cert):
    assert diff(cl_cert, cl_cert) == []
    rotated = dataclasses.replace(cl_cert, cycles=[c[1:] + c[:1] for c in cl_cert.cycles])
    assert diff(cl_cert, rotated) == []
    demoted = dataclasses.replace(cl_cert, status="BOUNDED_ONLY", detail="64")
    assert diff(cl_cert, demoted) == ["status: FULL -> BOUNDED_ONLY(64)"]
    grown = dataclasses.replace(cl_cert, cycles=cl_cert.cycles + [[1, 2]])
    assert diff(cl_cert, grown) == ["cycle added: (1,2)"]
    with pytest.raises(ValueError):
        diff(cl_cert, dataclasses.replace(cl_cert, rule="++++++++"))


@pytest.mark.parametrize(
    "text",
    ["not json", "[]", '{"status": "FULL"}', '{"rule": "CL", "status": "FULL", "bogus": 1}',
     '{"rule": "CL", "status": "FULL", "version": 99}'],
)
def test_parse_errors(text):
    with pytest.raises(CertificateError):
        parse_certificate(text)


def test_verify_reports_malformed_text():
    rep = verify("{")
    assert not rep.ok and rep.discrepancy


def _sample(gen, d, k):
    return list(itertools.islice(gen(d), 0, None, k))


@pytest.fixture(scope="module")
def cl_dict(cl_cert):
    return json.loads(emit(cl_cert)[0])


@pytest.mark.parametrize("gen", [derivation_coefficients, base_bounds, cycle_entries, determinant_zeros])
def test_mutation_sample_rejected(cl_dict, gen):
    sites = _sample(gen, cl_dict, 7)
    assert sites
    for label, mutated in sites:
        assert not verify(json.dumps(mutated)).ok, label


def test_structural_mutations_rejected(cl_dict):
    d = cl_dict
    cases = []
    e = copy.deepcopy(d); e["cycles"].pop(); cases.append(("cycle dropped", e))
    e = copy.deepcopy(d); e["cycles"].append([1, 2]); cases.append(("cycle added", e))
    e = copy.deepcopy(d); e["base"][0]["form"][0] = "2"; cases.append(("base form", e))
    e = copy.deepcopy(d); e["determinants"][0]["det"][0][1] = "5"; cases.append(("det term", e))
    e = copy.deepcopy(d); e["determinants"][1]["verdict"] = "RIGOROUS_NONZERO"; cases.append(("verdict", e))
    e = copy.deepcopy(d); e["coeffs"] = ["1", "2"]; cases.append(("coeffs", e))
    e = copy.deepcopy(d); e["families"].pop(); cases.append(("family dropped", e))
    for label, mutated in cases:
        assert not verify(json.dumps(mutated)).ok, label


def test_verifier_shares_no_code_with_the_pipeline():
    import ast
    import inspect
    from collatz2d import certificate
    tree = ast.parse(inspect.getsource(certificate))
    for node in tree.body:
        if isinstance(node, ast.ImportFrom):
            assert node.level == 0, f"module-level relative import {node.module}"
        if isinstance(node, ast.FunctionDef) and node.name != "build_certificate":
            for sub in ast.walk(node):
                assert not (isinstance(sub, ast.ImportFrom) and sub.level), f"{node.name} imports {sub.module}"
