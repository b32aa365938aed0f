import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from symdec.estimators import MatchingDecoder, SyndromeExtractor, UnionFindDecoder
from symdec.pauli import PauliString
from symdec.symmetry import sector_symmetry
from symdec.syndrome import DetectionEvents

BITFLIP = {"kind": "bitflip", "p": 0.05}


def test_params_and_clone():
    dec = MatchingDecoder(code="surface", size=5, channel=BITFLIP)
    assert dec.get_params() == {"code": "surface", "size": 5, "channel": BITFLIP, "symmetries": "auto"}
    dec.set_params(size=3)
    assert clone(dec).get_params()["size"] == 3
    assert UnionFindDecoder().get_params()["code"] == "surface"


def test_not_fitted():
    with pytest.raises(NotFittedError):
        MatchingDecoder(channel=BITFLIP).predict(np.zeros((1, 8)))
    with pytest.raises(NotFittedError):
        SyndromeExtractor().transform(["X0"])


def test_extract_then_decode():
    syn = SyndromeExtractor(code="surface", size=3).fit_transform(["X4", "I", PauliString.from_literal(9, "X1")])
    assert syn.shape == (3, 8) and syn.dtype == np.int8
    assert syn[0].sum() == 2 and syn[1].sum() == 0 and syn[2].sum() == 1
    for cls in (MatchingDecoder, UnionFindDecoder):
        dec = cls(code="surface", size=3, channel=BITFLIP).fit()
        out = dec.predict(syn)
        assert out[0].to_literal() == "X4" and out[1].is_identity() and out[2].weight == 1


def test_predict_events_objects():
    dec = MatchingDecoder(code="surface", size=3, channel=BITFLIP).fit()
    [c] = dec.predict([DetectionEvents(frozenset({(0, 0), (3, 0)}))])
    assert c.to_literal() == "X4"


def test_score():
    dec = MatchingDecoder(code="surface", size=5, channel=BITFLIP).fit()
    assert dec.score(["X0", "X3 X17", "I"]) == 1.0
    assert dec.score(["X0 X5 X10"]) == 0.0


def test_explicit_symmetries():
    from symdec.codes import build_surface_code

    code = build_surface_code(3)
    dec = MatchingDecoder(code=code, channel=BITFLIP, symmetries=[sector_symmetry(code, "Z")]).fit()
    assert dec.predict(np.array([[1, 0, 0, 1, 0, 0, 0, 0]]))[0].to_literal() == "X4"
    with pytest.raises(TypeError):
        MatchingDecoder(code=code, channel=BITFLIP, symmetries=[1, 2]).fit()


def test_input_validation():
    dec = MatchingDecoder(code="surface", size=3, channel=BITFLIP).fit()
    with pytest.raises(ValueError):
        dec.predict(np.zeros((1, 5)))
    with pytest.raises(ValueError):
        dec.predict(np.full((1, 8), 2))
    with pytest.raises(ValueError):
        MatchingDecoder(code="surface", size=3).fit()
    with pytest.raises(ValueError):
        MatchingDecoder(code="surface", size=0, channel=BITFLIP).fit()
    with pytest.raises(ValueError):
        SyndromeExtractor(size=3).fit().transform([PauliString(4)])


def test_module_doctest():
    import doctest

    import symdec.estimators

    assert doctest.testmod(symdec.estimators).failed == 0
