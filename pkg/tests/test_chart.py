import random

import pytest

from toroidal.chart import (
    QTF1,
    SMOOTH,
    TOROIDAL,
    CenterDescriptor,
    ChartForm,
    classify_form,
    column_minima,
    derive_center_form,
    extend_to_global_form,
    pullback_center_ideal,
    smooth_chart,
    verify_toroidal_form,
)
from toroidal.units import Stratum, TRIVIAL_UNIT, UnitToken, UnitValue, ZERO_STRATUM
from generators import random_toroidal_chart


def toroidal(matrix, d=None, m=None, **kw):
    ell = len(matrix)
    n = len(matrix[0]) if matrix else 0
    m = m if m is not None else ell
    d = d if d is not None else n + (m - ell)
    units = kw.pop("units", (TRIVIAL_UNIT,) * ell)
    return ChartForm(d=d, m=m, n=n, ell=ell, s=0, tag=TOROIDAL,
                     matrix=tuple(tuple(r) for r in matrix), units=units)


IDENTITY = toroidal([[1, 0], [0, 1]])


class TestVerifyToroidalForm:
    def test_identity_passes(self):
        assert verify_toroidal_form(IDENTITY).ok

    def test_zero_row_fails(self):
        report = verify_toroidal_form(toroidal([[1, 1], [0, 0]]))
        assert any(code == "row" for code, _ in report.failures)

    def test_zero_column_fails(self):
        report = verify_toroidal_form(toroidal([[1, 0], [2, 0]]))
        assert any(code == "column" for code, _ in report.failures)

    def test_unit_on_active_variable_rejected(self):
        with pytest.raises(ValueError):
            toroidal([[1, 0], [0, 1]],
                     units=(TRIVIAL_UNIT,
                            UnitToken().with_factor(0, UnitValue.of(2), 1)))


class TestClassify:
    def test_qtf1_with_s0_is_toroidal(self):
        cf = ChartForm(d=2, m=2, n=2, ell=2, s=0, tag=QTF1,
                       matrix=((1, 0), (0, 1)),
                       units=(TRIVIAL_UNIT,) * 2, ell_bar=2)
        tag, _ = classify_form(cf)
        assert tag == TOROIDAL

    def test_qtf1_with_min_row(self):
        cf = ChartForm(d=3, m=3, n=2, ell=2, s=1, tag=QTF1,
                       matrix=((1, 0), (0, 1), (0, 0)),
                       units=(TRIVIAL_UNIT,) * 3,
                       betas=(ZERO_STRATUM,), ell_bar=1)
        tag, _ = classify_form(cf)
        assert tag == QTF1

    def test_min_row_violation_rejected(self):
        cf = ChartForm(d=3, m=3, n=2, ell=2, s=1, tag=QTF1,
                       matrix=((1, 0), (0, 1), (1, 1)),
                       units=(TRIVIAL_UNIT,) * 3,
                       betas=(ZERO_STRATUM,), ell_bar=1)
        tag, diagnostics = classify_form(cf)
        assert tag is None
        assert any("column 1" in msg for _, msg in diagnostics[QTF1])

    def test_smooth(self):
        tag, _ = classify_form(smooth_chart(3, 2))
        assert tag == SMOOTH


class TestDeriveCenterForm:
    def test_full_divisor_center_keeps_matrix(self):
        z = CenterDescriptor(ell_bar=2, c=2, divisor_rows=(0, 1))
        adapted, order = derive_center_form(IDENTITY, z)
        assert adapted.tag == QTF1 and adapted.s == 0
        assert adapted.matrix == IDENTITY.matrix
        assert order == (0, 1)

    def test_partial_center_appends_zero_slot(self):
        cf = toroidal([[1, 0], [0, 1]], m=3, d=3)
        z = CenterDescriptor(ell_bar=1, c=2, divisor_rows=(0,))
        adapted, order = derive_center_form(cf, z)
        assert adapted.matrix == ((1, 0), (0, 1), (0, 0))
        assert adapted.s == 1 and adapted.betas[0].is_zero
        assert column_minima(adapted) == (0, 0)
        assert order == (0, 1)

    def test_row_permutation_is_stable(self):
        cf = toroidal([[2, 0], [0, 3], [1, 1]], m=3)
        z = CenterDescriptor(ell_bar=2, c=2, divisor_rows=(2, 0))
        adapted, order = derive_center_form(cf, z)
        assert order == (0, 2, 1)
        assert adapted.matrix == ((2, 0), (1, 1), (0, 3))

    def test_smooth_point_adaptation(self):
        z = CenterDescriptor(ell_bar=0, c=2)
        adapted, _ = derive_center_form(smooth_chart(3, 2), z)
        assert adapted.tag == QTF1 and adapted.ell == 0 and adapted.s == 2
        assert adapted.matrix == ((), ())

    def test_inconsistent_descriptor(self):
        with pytest.raises(ValueError):
            derive_center_form(IDENTITY, CenterDescriptor(3, 3, (0, 1, 2)))


class TestPullbackCenterIdeal:
    def test_divisible_rows_minimalize(self):
        cf = ChartForm(d=2, m=2, n=2, ell=2, s=0, tag=QTF1,
                       matrix=((1, 0), (1, 1)),
                       units=(TRIVIAL_UNIT,) * 2, ell_bar=2)
        ideal = pullback_center_ideal(cf, CenterDescriptor(2, 2, (0, 1)))
        assert ideal.gens == ((1, 0),)

    def test_identity_origin(self):
        z = CenterDescriptor(2, 2, (0, 1))
        adapted, _ = derive_center_form(IDENTITY, z)
        assert pullback_center_ideal(adapted, z).gens == ((0, 1), (1, 0))

    def test_slot_generator(self):
        cf = toroidal([[1, 1]], m=2, d=3)
        z = CenterDescriptor(ell_bar=1, c=2, divisor_rows=(0,))
        adapted, _ = derive_center_form(cf, z)
        ideal = pullback_center_ideal(adapted, z)
        assert ideal.gens == ((0, 0, 1), (1, 1, 0))

    def test_nonzero_beta_drops_slot_variable(self):
        cf = ChartForm(d=3, m=2, n=2, ell=1, s=1, tag=QTF1,
                       matrix=((1, 1), (1, 0)),
                       units=(TRIVIAL_UNIT,) * 2,
                       betas=(Stratum.generic("b"),), ell_bar=1)
        ideal = pullback_center_ideal(cf, CenterDescriptor(1, 2, (0,)))
        assert ideal.gens == ((1, 0, 0),)


class TestExtendToGlobalForm:
    def test_block_extension(self):
        cf = toroidal([[2, 3]], m=2, d=3)
        out = extend_to_global_form(cf, 2)
        assert out.matrix == ((2, 3, 0), (0, 0, 1))
        assert out.ell == 2 and out.n == 3
        assert verify_toroidal_form(out).ok

    def test_identity_extension(self):
        assert extend_to_global_form(IDENTITY, 2) == IDENTITY

    def test_smooth_extension_to_identity(self):
        cf = ChartForm(d=2, m=2, n=0, ell=0, s=0, tag=TOROIDAL)
        out = extend_to_global_form(cf, 2)
        assert out.matrix == ((1, 0), (0, 1))

    def test_random_extension_preserves_positivity(self):
        rng = random.Random(5)
        for _ in range(50):
            cf = random_toroidal_chart(rng)
            out = extend_to_global_form(cf, cf.m)
            assert verify_toroidal_form(out).ok


class TestAlgebraProperties:
    def test_pullback_gcd_matches_row_minimum(self):
        # Full-divisor centers: the pullback's gcd is the componentwise
        # minimum of the center rows.
        rng = random.Random(313)
        for _ in range(60):
            cf = random_toroidal_chart(rng)
            z = CenterDescriptor(ell_bar=cf.ell, c=cf.ell,
                                 divisor_rows=tuple(range(cf.ell)))
            if cf.ell < 2:
                continue
            adapted, _ = derive_center_form(cf, z)
            ideal = pullback_center_ideal(adapted, z)
            from toroidal.monomial import gcd_generators
            mins = tuple(min(adapted.matrix[i][j] for i in range(cf.ell))
                         for j in range(cf.n))
            assert gcd_generators(ideal)[:cf.n] == mins

    def test_classify_monotone_toroidal_implies_qtf1(self):
        from toroidal.chart import _positivity_failures
        rng = random.Random(317)
        for _ in range(60):
            cf = random_toroidal_chart(rng)
            if verify_toroidal_form(cf).ok:
                assert not _positivity_failures(cf, cf.ell)
