"""Structural properties of every algebra the fast tier completes."""
import pytest

from axialforge import analysis
from axialforge.linalg import kernel
from helpers import build, closure_layers, property_failures

COMPLETED = [
    "1/1+1+1/(2A)^2 2B", "1/1+1+1/2A (2B)^2", "1/1+1+1/(2B)^3",
    "2^2/1+2+2/4A (2A)^2", "2^2/1+2+2/4A 2A 2B", "2^2/1+2+2/4A (2B)^2",
    "2^2/1+2+2/4B (2A)^2", "2^2/1+2+2/4B 2A 2B", "2^2/1+2+2/4B (2B)^2",
    "2^2/2+2+2/4A (2B)^2", "2^2/2+2+2/4B (2A)^2", "2^2/2+2+2/4B 2A 2B", "2^2/2+2+2~2/4B",
    "S3/1+3/3A 2A", "S3/1+3/3A 2B", "S3/1+3/3C 2B",
    "S3/1+3+3/6A (2A)^2", "S3/1+3+3/6A 2A 2B", "S3/1+3+3/6A (2B)^2", "S3/3+3+3/6A",
    "2^3/4+4+4/(4B)^3 (2B)^3", "2^3/2+4+4/4A 4B (2A)^2",
    "2^3/2+2+4/(4A)^2 (2B)^3", "2^3/2+2+4/4A 4B (2A)^2 2B", "2^3/2+2+4/4A 4B 2A (2B)^2",
    "2^3/2+2+4/(4B)^2 (2B)^3",
    "D10/1+5/5A 2B", "D12/2+6/6A",
    "S4/6/3A 2A", "S4/6/3A 2B", "S4/6/3C 2A", "S4/6/3C 2B",
]


@pytest.fixture(scope="module", params=COMPLETED)
def built(request):
    case, verdict = build(request.param)
    assert verdict.algebra is not None
    return case, verdict.algebra


def test_axes_generate_and_obey_fusion(built):
    _, alg = built
    assert alg.closure(alg.axes).dim == alg.dim
    for a in alg.axes:
        assert alg.fusion_failures(a) == []


def test_miyamoto_group_and_closure(built):
    case, alg = built
    assert property_failures(alg, case.axet, analysis.m_closure(alg)) == []


def test_m_closure_is_tight(built):
    _, alg = built
    dims = closure_layers(alg)
    m = analysis.m_closure(alg)
    assert dims[m - 1] == alg.dim
    assert m == 1 or dims[m - 2] < alg.dim


def test_radical_quotient_is_nondegenerate(built):
    case, alg = built
    res = analysis.analyse(alg, case.axet, case.shape)
    sig = res.frobenius.signature
    assert sig is not None and sig[2] == 0
    if sig[1] == 0:
        assert res.radical_quotient is None
        return
    quo = res.radical_quotient
    assert quo.dim == alg.dim - sig[1]
    assert kernel(quo.frobenius.matrix).dim == 0
    assert quo.frobenius.kind == "pos"
