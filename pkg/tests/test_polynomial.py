import pytest

from adiabatic_fock.errors import PolynomialSyntaxError, VariableCountMismatch
from adiabatic_fock.polynomial import DiophantineSpec


@pytest.mark.parametrize("text, point, value", [
    ("x - 2", (5,), 3),
    ("x1^2 + 1", (3,), 10),
    ("3*x1^2*x2 - 7", (2, 5), 53),
    ("-x1 + x2**3", (4, 2), 4),
    ("x + y - 1", (0, 0), -1),
    ("7", (9,), 7),
    ("2*x1*x1", (3,), 18),
])
def test_evaluate(text, point, value):
    assert DiophantineSpec.parse(text, len(point))(point) == value


def test_exact_big_integers():
    spec = DiophantineSpec.parse("x^40 - 1")
    assert spec((3,)) == 3 ** 40 - 1


def test_infers_variable_count():
    assert DiophantineSpec.parse("x1 + x3").n_vars == 3


def test_too_many_variables():
    with pytest.raises(VariableCountMismatch):
        DiophantineSpec.parse("x1 + x2", n_vars=1)


@pytest.mark.parametrize("bad", ["", "x +", "2 x", "x^y", "x^-1", "(x+1)", "x0", "3 + * x"])
def test_syntax_errors(bad):
    with pytest.raises(PolynomialSyntaxError):
        DiophantineSpec.parse(bad)


def test_str_roundtrip():
    spec = DiophantineSpec.parse("3*x1^2*x2 - 7 + x2")
    again = DiophantineSpec.parse(str(spec), 2)
    for point in [(0, 0), (1, 2), (3, 1)]:
        assert spec(point) == again(point)
