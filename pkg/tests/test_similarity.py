import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctxsim.combine import CombinationConfig, Part, Pooling, SingleLayer
from ctxsim.corpus import DatasetItem, TargetSpan
from ctxsim.errors import DegenerateVectorError, RecordNotFound
from ctxsim.similarity import ItemPrediction, cosine, predict_item
from helpers import vector_store

CONFIG = CombinationConfig((Part("m", SingleLayer(-1), Pooling.FIRST),))


def make_item(item_id="it"):
    context = "alpha beta"
    return DatasetItem(
        id=item_id,
        word1="alpha",
        word2="beta",
        context1=context,
        context2=context,
        span_w1_c1=TargetSpan(0, 5, "alpha"),
        span_w2_c1=TargetSpan(6, 10, "beta"),
        span_w1_c2=TargetSpan(0, 5, "alpha"),
        span_w2_c2=TargetSpan(6, 10, "beta"),
    )


def test_cosine_identity():
    assert cosine(np.array([1.0, 0.0]), np.array([1.0, 0.0])) == 1.0


def test_cosine_orthogonal():
    assert cosine(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0


def test_cosine_formula():
    assert cosine(np.array([1.0, 1.0]), np.array([1.0, 0.0])) == pytest.approx(
        0.7071067812, abs=1e-9
    )


def test_cosine_degenerate_names_side():
    with pytest.raises(DegenerateVectorError, match="left"):
        cosine(np.zeros(2), np.ones(2))
    with pytest.raises(DegenerateVectorError, match="right"):
        cosine(np.ones(2), np.zeros(2))


def test_cosine_dimension_mismatch():
    with pytest.raises(ValueError, match="equal-length"):
        cosine(np.ones(2), np.ones(3))


def test_cosine_never_overshoots():
    v = np.full(400, 0.1)
    assert cosine(v, v) <= 1.0


def test_predict_identical_vectors():
    store = vector_store(
        {("it", c, w): [3.0, 4.0] for c in (1, 2) for w in (1, 2)}
    )
    pred = predict_item(make_item(), store, CONFIG)
    assert (pred.sim1, pred.sim2, pred.change) == (1.0, 1.0, 0.0)


def test_predict_orthogonal_second_context():
    store = vector_store(
        {
            ("it", 1, 1): [1.0, 0.0],
            ("it", 1, 2): [1.0, 0.0],
            ("it", 2, 1): [1.0, 0.0],
            ("it", 2, 2): [0.0, 1.0],
        }
    )
    pred = predict_item(make_item(), store, CONFIG)
    assert (pred.sim1, pred.sim2, pred.change) == (1.0, 0.0, -1.0)


def test_predict_hand_computed_fixture():
    store = vector_store(
        {
            ("it", 1, 1): [2.0, 1.0],
            ("it", 1, 2): [1.0, 2.0],
            ("it", 2, 1): [3.0, 0.0],
            ("it", 2, 2): [1.0, 1.0],
        }
    )
    pred = predict_item(make_item(), store, CONFIG)
    assert pred.sim1 == pytest.approx(0.8, abs=1e-6)
    assert pred.sim2 == pytest.approx(0.7071068, abs=1e-6)
    assert pred.change == pytest.approx(-0.0928932, abs=1e-6)


def test_predict_missing_record_names_key():
    store = vector_store({("it", 1, 1): [1.0, 0.0]})
    with pytest.raises(RecordNotFound) as err:
        predict_item(make_item(), store, CONFIG)
    assert err.value.key.item_id == "it"


def test_prediction_invariant():
    pred = ItemPrediction.of("x", 0.25, -0.5)
    assert pred.change == pred.sim2 - pred.sim1


# grid-valued components keep scaling well inside the normal float range
_vec = st.lists(
    st.integers(-10000, 10000).map(lambda n: n / 100), min_size=2, max_size=8
).filter(lambda v: any(x != 0 for x in v))


@settings(max_examples=80)
@given(_vec, _vec, st.floats(1e-3, 1e3), st.data())
def test_scale_invariance(v, w, factor, data):
    dim = min(len(v), len(w))
    v, w = np.asarray(v[:dim]), np.asarray(w[:dim])
    if not v.any() or not w.any():
        return
    base = cosine(v, w)
    side = data.draw(st.sampled_from(("v", "w", "both")))
    sv = v * factor if side in ("v", "both") else v
    sw = w * factor if side in ("w", "both") else w
    assert abs(cosine(sv, sw) - base) <= 1e-9


@settings(max_examples=60)
@given(st.data())
def test_symmetry_and_bounds(data):
    vectors = {
        ("it", c, w): data.draw(_vec.map(lambda v: v[:3]).filter(lambda v: any(v)))
        for c in (1, 2)
        for w in (1, 2)
    }
    if any(len(v) != 3 for v in vectors.values()):
        return
    store = vector_store(vectors)
    swapped = vector_store(
        {(i, c, 3 - w): v for (i, c, w), v in vectors.items()}
    )
    pred = predict_item(make_item(), store, CONFIG)
    mirror = predict_item(make_item(), swapped, CONFIG)
    assert pred == mirror
    assert -1.0 <= pred.sim1 <= 1.0 and -1.0 <= pred.sim2 <= 1.0
    assert -2.0 <= pred.change <= 2.0
