import numpy as np
import pytest

from condsteer import FamilySpec, states
from condsteer.errors import NotPositive, OutOfRange, SpecSyntaxError


@pytest.mark.parametrize(
    "text",
    [
        "werner2:p=0.6",
        "weyl2:t=0.3,-0.2,0.5",
        "isotropic:d=3,eta=0.4",
        "noisy:r=0.7,inner=(wernerd:d=3,eta=0.5)",
        "theta:theta=0.3,beta=0.9",
        "nonweyl:x=0.5,p=0.4",
        "general2:a=0,0,0.1,b=0,0,0,T=0.1,0,0,0,0.2,0,0,0,0.3",
    ],
)
def test_canonical_roundtrip(text):
    spec = FamilySpec.parse(text)
    assert str(spec) == text
    assert FamilySpec.parse(str(spec)) == spec
    spec.build()


def test_builds_match_constructors():
    assert np.allclose(FamilySpec.parse("werner2:p=0.6").build().mat, states.werner_qubit(0.6).mat)
    noisy = FamilySpec.parse("noisy:r=0.7,inner=(wernerd:d=3,eta=0.5)").build()
    assert np.allclose(noisy.mat, states.noisy_mix(states.werner_qudit(3, 0.5), 0.7).mat)


def test_nested_noisy_specs():
    text = "noisy:r=0.5,inner=(noisy:r=0.9,inner=(werner2:p=1))"
    assert str(FamilySpec.parse(text)) == text


def test_templates():
    t = FamilySpec.parse("werner2")
    assert t.missing() == ["p"]
    with pytest.raises(SpecSyntaxError):
        t.build()
    assert str(t.with_params(p=0.25)) == "werner2:p=0.25"
    n = FamilySpec.parse("noisy:r=0.5,inner=(isotropic:d=4)")
    assert n.missing() == ["inner.eta"]
    assert n.with_params(inner__eta=0.3) == n.with_params(**{"inner.eta": 0.3})


@pytest.mark.parametrize(
    "text",
    [
        "werner9:p=1",
        "werner2:q=1",
        "werner2:p=abc",
        "weyl2:t=1,2",
        "isotropic:d=2.5,eta=0.1",
        "werner2:p=0.1,p=0.2",
        "noisy:r=0.5,inner=(werner2:p=0.1",
        "werner2:p=0.1)",
        ":p=1",
        "werner2:0.5",
    ],
)
def test_syntax_errors(text):
    with pytest.raises(SpecSyntaxError):
        FamilySpec.parse(text)


def test_physical_errors_surface_at_build():
    with pytest.raises(OutOfRange):
        FamilySpec.parse("werner2:p=1.5").build()
    with pytest.raises(NotPositive):
        FamilySpec.parse("weyl2:t=0.9,0.9,0.9").build()
