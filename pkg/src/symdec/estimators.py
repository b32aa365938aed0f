"""scikit-learn style front ends: a syndrome transformer and two decoders.

>>> dec = MatchingDecoder(code="surface", size=3, channel={"kind": "bitflip", "p": 0.05}).fit()
>>> dec.predict(SyndromeExtractor(code="surface", size=3).fit().transform(["X4"]))[0].to_literal()
'X4'
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from symdec.codes import logical_class
from symdec.harness import symmetries_for
from symdec.matching import SymmetryDecoder
from symdec.symmetry import Symmetry
from symdec.syndrome import syndrome_bits
from symdec.validation import check_channel, check_code, check_errors, check_events

__all__ = ["SyndromeExtractor", "MatchingDecoder", "UnionFindDecoder"]


class SyndromeExtractor(TransformerMixin, BaseEstimator):
    """Errors in, 0/1 syndrome matrix out (one row per error)."""

    def __init__(self, code="surface", size=3):
        self.code = code
        self.size = size

    def fit(self, X=None, y=None):
        self.code_ = check_code(self.code, self.size)
        self.n_features_out_ = len(self.code_.generators)
        return self

    def transform(self, X):
        check_is_fitted(self)
        errors = check_errors(X, self.code_.n)
        m = self.n_features_out_
        out = np.zeros((len(errors), m), dtype=np.int8)
        for i, e in enumerate(errors):
            bits = syndrome_bits(self.code_.generators, e)
            out[i] = [(bits >> g) & 1 for g in range(m)]
        return out


class MatchingDecoder(BaseEstimator):
    """Minimum-weight perfect-matching decoder.

    ``symmetries`` is ``"auto"``, ``"default"``, ``"rows"``, ``"ballistic"``
    or an explicit list of :class:`~symdec.symmetry.Symmetry`. Fitting only
    builds the detector graphs; there is nothing to learn from data.
    """

    _method = "mwpm"

    def __init__(self, code="surface", size=3, channel=None, symmetries="auto"):
        self.code = code
        self.size = size
        self.channel = channel
        self.symmetries = symmetries

    def fit(self, X=None, y=None):
        self.code_ = check_code(self.code, self.size)
        self.channel_ = check_channel(self.channel)
        if isinstance(self.symmetries, str):
            syms = symmetries_for(self.code_, self.channel_, self.symmetries)
        else:
            syms = list(self.symmetries)
            if not all(isinstance(s, Symmetry) for s in syms):
                raise TypeError("symmetries must be a name or a list of Symmetry objects")
        self.decoder_ = SymmetryDecoder(self.code_, self.channel_, syms, self._method)
        self.n_features_in_ = len(self.code_.generators)
        return self

    def predict(self, X):
        """One correction :class:`~symdec.pauli.PauliString` per syndrome row or events object."""
        check_is_fitted(self)
        return [self.decoder_.decode(ev) for ev in check_events(X, self.n_features_in_)]

    def score(self, X, y=None):
        """Fraction of the errors ``X`` that decode to a trivial logical."""
        check_is_fitted(self)
        errors = check_errors(X, self.code_.n)
        gens = self.code_.generators
        ok = 0
        for e in errors:
            bits = syndrome_bits(gens, e)
            row = np.array([[(bits >> g) & 1 for g in range(len(gens))]])
            corr = self.predict(row)[0]
            ok += all(c == "I" for c in logical_class(self.code_, corr * e))
        return ok / len(errors) if errors else 1.0


class UnionFindDecoder(MatchingDecoder):
    """Union-find decoder with the same interface as :class:`MatchingDecoder`."""

    _method = "unionfind"
