import math

import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hermkit import geodsl
from hermkit.errors import (ConfigError, DimensionMismatch, DslError,
                            DslSyntaxError, EvaluationError, UnknownSymbol)

TORUS_SRC = """
# flat torus with the usual structure
dim = 2
domain x1 = [0.0, 6.283185307179586]
domain x2 = [0.0, 6.283185307179586]
g = [[1, 0], [0, 1]]
J = [[0, -1], [1, 0]]
map square -> 2 = [x1^2 - x2^2, 2*x1*x2]
"""

SPHERE_SRC = """
dim = 2
domain x1 = [0.3, 2.8]
domain x2 = [0.0, 6.0]
g[1][1] = 1
g[2][2] = sin(x1)^2
"""


def test_parse_identity_metric():
    config = geodsl.parse("dim = 2\ng = [[1, 0], [0, 1]]")
    fn = config.metric_fn()
    npt.assert_allclose(fn(np.array([0.3, -0.4])), np.eye(2))


def test_parse_elementwise_metric_matches_oracle():
    config = geodsl.parse(SPHERE_SRC)
    fn = config.metric_fn()
    for theta in (0.5, 1.0, 2.0):
        npt.assert_allclose(fn(np.array([theta, 1.0])),
                            np.diag([1.0, math.sin(theta) ** 2]), atol=1e-15)


def test_parse_dangling_comma_is_syntax_error():
    with pytest.raises(DslSyntaxError) as err:
        geodsl.parse("dim = 2\ng = [[1,]")
    assert err.value.line == 2
    assert err.value.col == 9


@pytest.mark.parametrize("src,value", [
    ("2+3*4^2", 50.0),
    ("2^3^2", 512.0),          # right-associative
    ("6/3/2", 1.0),            # left-associative
    ("2^-1", 0.5),
    ("(2+3)*4", 20.0),
])
def test_expression_precedence(src, value):
    expr = geodsl.parse_expr(src)
    assert geodsl.evaluate(expr, []) == value


def test_unary_minus_binds_looser_than_power():
    expr = geodsl.parse_expr("-x1^2", dim=1)
    assert geodsl.evaluate(expr, [3.0]) == -9.0


def test_atan2_against_library():
    expr = geodsl.parse_expr("atan2(x2, x1)", dim=2)
    npt.assert_allclose(geodsl.evaluate(expr, [1.0, 1.0]), math.pi / 4)


@pytest.mark.parametrize("src,point", [
    ("sqrt(x1)", [-1.0]),
    ("log(x1)", [0.0]),
    ("x1/0", [1.0]),
    ("10^(10^10)", [0.0]),
])
def test_evaluation_domain_errors(src, point):
    expr = geodsl.parse_expr(src, dim=1)
    with pytest.raises(EvaluationError):
        geodsl.evaluate(expr, point)


def test_unknown_symbol_and_dimension_mismatch():
    with pytest.raises(UnknownSymbol):
        geodsl.parse_expr("foo(x1)", dim=1)
    with pytest.raises(UnknownSymbol):
        geodsl.parse_expr("y1 + 1", dim=1)
    with pytest.raises(DimensionMismatch):
        geodsl.parse("dim = 2\ng = [[1, 0], [0, x3]]")


def test_function_arity_checked():
    with pytest.raises(DslSyntaxError):
        geodsl.parse_expr("sin(x1, x2)", dim=2)
    with pytest.raises(DslSyntaxError):
        geodsl.parse_expr("atan2(x1)", dim=2)


def test_structure_square_identity_rejected():
    with pytest.raises(ConfigError):
        geodsl.parse("dim = 2\ng = [[1,0],[0,1]]\nJ = [[1, 0], [0, 1]]")


def test_non_positive_metric_rejected():
    with pytest.raises(ConfigError):
        geodsl.parse("dim = 2\ng = [[1, 0], [0, -1]]")


def test_metric_symmetrized_with_warning():
    config = geodsl.parse("dim = 2\ng = [[1, 0.001], [0, 1]]")
    assert config.warnings
    fn = config.metric_fn()
    g = fn(np.zeros(2))
    npt.assert_allclose(g, g.T)
    npt.assert_allclose(g[0, 1], 0.0005)


def test_map_component_count_mismatch():
    with pytest.raises(DimensionMismatch):
        geodsl.parse("dim = 2\ng = [[1,0],[0,1]]\nmap f -> 2 = [x1]")


def test_missing_dim_or_metric():
    with pytest.raises(ConfigError):
        geodsl.parse("g = [[1]]")
    with pytest.raises(ConfigError):
        geodsl.parse("dim = 1")


def test_round_trip_torus_config():
    config = geodsl.parse(TORUS_SRC)
    again = geodsl.parse(config.to_source())
    assert again.dim == config.dim
    assert again.domain == config.domain
    assert again.metric == config.metric
    assert again.structure == config.structure
    assert again.maps == config.maps
    assert config.to_source() == again.to_source()


def _config_corpus():
    """50 structurally varied valid configs."""
    corpus = []
    funcs = ["sin", "cos", "exp"]
    for k in range(50):
        f = funcs[k % 3]
        scale = 1.0 + (k % 7) * 0.25
        entries = f"[[{scale} + {f}(x1)^2, 0], [0, {scale}]]"
        lines = [f"dim = 2", f"domain x1 = [0.1, {1.0 + k % 5}]",
                 "domain x2 = [-1.0, 1.0]", f"g = {entries}"]
        if k % 2 == 0:
            lines.append("J = [[0, -1], [1, 0]]")
        if k % 4 == 0:
            lines.append(f"map m{k} -> 1 = [x1 * {1 + k} - x2 / 2]")
        corpus.append("\n".join(lines))
    return corpus


def test_round_trip_property_on_corpus():
    """parse -> print -> parse is the identity on the AST for 50 valid configs."""
    corpus = _config_corpus()
    assert len(corpus) == 50
    for src in corpus:
        config = geodsl.parse(src)
        printed = config.to_source()
        reparsed = geodsl.parse(printed)
        assert reparsed.metric == config.metric
        assert reparsed.structure == config.structure
        assert reparsed.maps == config.maps
        assert reparsed.to_source() == printed


@settings(max_examples=300, deadline=None, derandomize=True)
@given(st.binary(max_size=120))
def test_parser_never_panics_on_bytes(data):
    """Arbitrary bytes produce a config or a structured DslError, nothing else."""
    try:
        geodsl.parse(data)
    except DslError:
        pass


@settings(max_examples=300, deadline=None, derandomize=True)
@given(st.text(alphabet="dimgJxap[]()^*/+-=.,0123456789 \n", max_size=120))
def test_parser_never_panics_on_near_miss_text(text):
    try:
        geodsl.parse(text)
    except DslError:
        pass


def test_to_chart_and_map(cfg):
    config = geodsl.parse(TORUS_SRC)
    chart, structure = geodsl.to_chart(config)
    assert chart.dim == 2
    assert structure is not None
    npt.assert_allclose(structure(np.array([1.0, 1.0])),
                        np.array([[0.0, -1.0], [1.0, 0.0]]))
    spec = geodsl.to_map(config, "square", cfg)
    npt.assert_allclose(spec(np.array([2.0, 1.0])), [3.0, 4.0])
    assert spec.source_structure is not None
    assert spec.target_structure is not None


def test_deep_nesting_is_structured_error():
    src = "dim = 1\ng = [[" + "(" * 4000 + "1" + ")" * 4000 + "]]"
    try:
        geodsl.parse(src)
    except DslError:
        pass
