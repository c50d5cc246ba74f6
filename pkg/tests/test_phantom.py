import numpy as np
import pytest

from clotseg.classifier import NEGATIVE, POSITIVE, classify
from clotseg.errors import InclusionOutsideLumen
from clotseg.image_io import write_pgm
from clotseg.phantom import KINDS, PhantomSpec, generate, generate_corpus


class TestGenerate:
    def test_clean_lumen_negative_no_structure(self):
        study, lumen, clot, expected = generate(
            PhantomSpec.default("clean_lumen", seed=2, noise_sigma=0.0))
        assert expected == NEGATIVE
        a = classify(study, lumen, clot)
        assert a.verdict == NEGATIVE
        assert a.intensity.value == pytest.approx(1.0, abs=0.05)
        assert a.occupation.value == 0.0  # nothing for Otsu to segment

    def test_real_clot_positive_with_margins(self):
        study, lumen, clot, expected = generate(
            PhantomSpec.default("real_clot", seed=2, noise_sigma=0.0))
        a = classify(study, lumen, clot)
        assert a.verdict == expected == POSITIVE
        assert 0.30 <= a.intensity.value <= 0.50
        assert a.occupation.value >= 0.14
        assert a.eccentricity.value <= 0.5

    def test_turbulence_negative(self):
        study, lumen, clot, expected = generate(
            PhantomSpec.default("turbulence", seed=2, noise_sigma=0.0))
        a = classify(study, lumen, clot)
        assert a.verdict == expected == NEGATIVE
        assert a.intensity.value > 0.60 or a.occupation.value == 0.0

    def test_deterministic_bytes(self):
        spec = PhantomSpec.default("real_clot", seed=9, noise_sigma=0.02)
        img1 = generate(spec)[0].image
        img2 = generate(spec)[0].image
        assert write_pgm(img1) == write_pgm(img2)

    def test_inclusion_outside_lumen(self):
        with pytest.raises(InclusionOutsideLumen):
            generate(PhantomSpec.default("real_clot",
                                         inclusion_center=(220.0, 128.0)))

    def test_invalid_kind(self):
        with pytest.raises(ValueError):
            generate(PhantomSpec(kind="nonsense"))


class TestCorpus:
    def test_reproducible_and_balanced(self):
        a = generate_corpus(3, 17, noise_sigma=0.02)
        b = generate_corpus(3, 17, noise_sigma=0.02)
        assert len(a) == 9
        kinds = [c.spec.kind for c in a]
        assert all(kinds.count(k) == 3 for k in KINDS)
        for ca, cb in zip(a, b):
            assert write_pgm(ca.study.image) == write_pgm(cb.study.image)
            assert ca.sidecar == cb.sidecar

    def test_inclusion_radius_floor(self):
        cases = generate_corpus(20, 1, noise_sigma=0.0)
        for c in cases:
            if c.spec.kind == "real_clot":
                assert c.spec.inclusion_radius >= 6.0

    def test_sidecar_schema(self):
        case = generate_corpus(1, 3)[0]
        assert set(case.sidecar) == {"roi", "expected", "spec"}
        assert set(case.sidecar["roi"]) == {"lumen", "clot"}
        assert case.sidecar["expected"] in (POSITIVE, NEGATIVE)
