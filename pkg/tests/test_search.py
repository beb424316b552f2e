import pytest

from ihoml.carriers import Dims, Value, enumerate_carrier
from ihoml.errors import BudgetExhausted
from ihoml.evaluator import evaluate
from ihoml.model import Frame, FrameClass, Model
from ihoml.search import (COUNTERMODEL, NO_MODEL, UNKNOWN, VALID, WITNESS, Bounds, check_entailment,
                          check_goals, check_schema, definitions_of, enumerate_models, find_model,
                          goal_with_bottom, space_size, verify_countermodel, verify_model)
from ihoml.types import GAMMA, SIGMA, Fun
from ihoml.variants import build_variant, mk_barcan


def closed_form(w, e, frame_class, arg_carrier):
    frames = {"K": 2 ** (w * w), "KB": 2 ** (w * (w + 1) // 2), "S5": {1: 1, 2: 2}[w]}[frame_class]
    exists = 2 ** (e * w)
    interps = 2 ** (w * arg_carrier)
    return frames, exists, frames * exists * interps


@pytest.mark.parametrize("w,e", [(1, 1), (1, 2), (2, 1), (2, 2)])
@pytest.mark.parametrize("frame_class", ["K", "KB", "S5"])
def test_space_size_matches_closed_form(w, e, frame_class):
    gamma_carrier, delta_carrier = 2 ** (e * w), 2 ** e
    for name, arg in (("scott", gamma_carrier), ("anderson", gamma_carrier), ("fitting", delta_carrier)):
        frames, exists, models = closed_form(w, e, frame_class, arg)
        got = space_size(build_variant(name), Dims(e, w), frame_class)
        assert (got["frames"], got["exists"], got["models"]) == (frames, exists, models)


def test_scott_one_by_one_count():
    # 2 frames, existsAt tables and 4 interpretations of P
    assert space_size(build_variant("scott"), Dims(1, 1), FrameClass.KB)["models"] == 2 * 2 * 4


def test_fitting_two_by_two_is_enumerable():
    size = space_size(build_variant("fitting"), Dims(2, 2), FrameClass.KB)
    assert size["models"] // size["frames"] <= 2 ** 8 * 2 ** 3 * 2 ** 4
    assert size["models"] < Bounds().budget


def test_pruning_never_enlarges_space():
    for name in ("scott", "anderson"):
        full = space_size(build_variant(name), Dims(1, 2), FrameClass.KB)
        pruned = space_size(build_variant(name), Dims(1, 2), FrameClass.KB, prune=True)
        assert pruned["models"] <= full["models"]


def test_enumeration_order_and_count():
    bounds = Bounds(max_worlds=2, max_entities=1)
    spec = build_variant("scott")
    models = list(enumerate_models(spec, bounds, FrameClass.KB))
    sizes = [(m.worlds, m.entities) for m in models]
    assert sizes == sorted(sizes)
    assert len(models) == sum(space_size(spec, Dims(e, w), FrameClass.KB)["models"] for w, e in bounds.dims_order())
    one = [m for m in models if m.worlds == 1]
    assert [m.frame.access for m in one[:8]] == [frozenset()] * 8
    assert one[-1].frame.access == frozenset({(0, 0)})


def test_bounds_validation():
    with pytest.raises(ValueError):
        Bounds(max_worlds=0)
    with pytest.raises(ValueError):
        Bounds(strategy="guess")
    with pytest.raises(ValueError):
        Bounds(seed=-1)
    assert Bounds(max_worlds=2, max_entities=2).dims_order() == [(1, 1), (1, 2), (2, 1), (2, 2)]


def test_anderson_mc_countermodel():
    v = check_entailment("anderson", "MC", Bounds(max_worlds=2, max_entities=1, strategy="exhaustive"))
    assert v.tag == COUNTERMODEL
    assert (v.model.worlds, v.model.entities) == (2, 1)
    verify_countermodel(build_variant("anderson"), build_variant("anderson").goals["MC"], v.model)


def test_scott_t3_valid():
    v = check_entailment("scott", "T3", Bounds(max_worlds=2, max_entities=1, strategy="exhaustive"))
    assert v.tag == VALID and not v.sampled


def test_anderson_u1_countermodel():
    v = check_entailment("anderson", "U1", Bounds(max_worlds=2, max_entities=1, strategy="exhaustive"))
    assert v.tag == COUNTERMODEL
    assert (v.model.worlds, v.model.entities) == (2, 1)


def test_fitting_t3_de_dicto_countermodel():
    v = check_entailment("fitting", "T3_deDicto", Bounds(max_worlds=2, max_entities=2, strategy="exhaustive"))
    assert v.tag == COUNTERMODEL
    assert (v.model.worlds, v.model.entities) == (2, 2)
    assert v.failing["worlds"]


def test_countermodel_is_first_in_enumeration_order():
    spec = build_variant("anderson")
    v = check_entailment(spec, "MC", Bounds(max_worlds=2, max_entities=1, strategy="exhaustive"))
    for m in enumerate_models(spec, Bounds(max_worlds=2, max_entities=1), FrameClass.KB):
        try:
            verify_countermodel(spec, spec.goals["MC"], m)
        except AssertionError:
            continue
        assert m == v.model
        break


def test_countermodel_stable_under_larger_bounds():
    small = check_entailment("anderson", "MC", Bounds(max_worlds=2, max_entities=1))
    big = check_entailment("anderson", "MC", Bounds(max_worlds=2, max_entities=2))
    assert small.tag == big.tag == COUNTERMODEL
    assert small.model == big.model


def test_verify_countermodel_rejects_models_where_goal_holds():
    spec = build_variant("anderson")
    witness = find_model(spec, Bounds(max_worlds=1, max_entities=1))
    assert witness.tag == WITNESS
    with pytest.raises(AssertionError):
        verify_countermodel(spec, spec.goals["MC"], witness.model)


def test_verify_model_rejects_non_models():
    spec = build_variant("scott")
    m = Model(Frame(1), 1, ((True,),), (("P", _const_p(False)),))
    with pytest.raises(AssertionError):
        verify_model(spec, m)


def _const_p(value):
    return Value(Fun(GAMMA, SIGMA), tuple((value,) for _ in enumerate_carrier(GAMMA, Dims(1, 1))))


@pytest.mark.parametrize("name", ["scott", "anderson", "fitting"])
@pytest.mark.parametrize("logic", ["KB", "S5"])
def test_find_model_one_by_one(name, logic):
    v = find_model(name, Bounds(max_worlds=1, max_entities=1), logic)
    assert v.tag == WITNESS
    spec = build_variant(name)
    verify_model(spec, v.model)
    extra = definitions_of(spec, v.model)
    assert all(evaluate(t, model=v.model, extra=extra).raw for _, t in spec.axioms)


def test_bottom_axiom_has_no_model():
    v = find_model(goal_with_bottom(build_variant("scott")), Bounds(max_worlds=2, max_entities=1))
    assert v.tag == NO_MODEL and not v.sampled


def test_exhaustive_over_budget_is_refused():
    bounds = Bounds(dims=((2, 2),), strategy="exhaustive")
    with pytest.raises(BudgetExhausted):
        check_goals("anderson", ["MC"], bounds, FrameClass.KB)
    v = check_entailment("anderson", "MC", bounds)
    assert v.tag == UNKNOWN and v.sampled


def test_auto_falls_back_to_sampling():
    v = check_entailment("anderson", "T6", Bounds(dims=((2, 2),), strategy="auto", budget=3000))
    assert v.stats["sizes"][0]["mode"] != "exhaustive"
    assert v.tag in (UNKNOWN, COUNTERMODEL)
    if v.tag == UNKNOWN:
        assert v.sampled


def test_same_seed_same_verdict():
    bounds = Bounds(dims=((2, 2),), strategy="randomized", budget=2000, seed=42)
    a = check_entailment("anderson", "MC", bounds)
    b = check_entailment("anderson", "MC", bounds)
    assert a.to_json() == b.to_json()


def test_parallel_matches_sequential():
    seq = check_goals("anderson", ["MC", "U1", "T6"], Bounds(max_worlds=2, max_entities=1), FrameClass.KB)
    par = check_goals("anderson", ["MC", "U1", "T6"], Bounds(max_worlds=2, max_entities=1, workers=2),
                      FrameClass.KB)
    for g in ("MC", "U1", "T6"):
        assert seq[g].tag == par[g].tag
        assert seq[g].model == par[g].model
        assert seq[g].failing == par[g].failing


def test_randomized_parallel_matches_sequential():
    bounds = Bounds(dims=((2, 2),), strategy="randomized", budget=1000, seed=3)
    seq = check_entailment("anderson", "MC", bounds)
    par = check_entailment("anderson", "MC", Bounds(dims=((2, 2),), strategy="randomized", budget=1000,
                                                     seed=3, workers=2))
    assert seq.tag == par.tag and seq.model == par.model


def test_schema_exhaustive_within_cap():
    m = Model(Frame(2, {(0, 0), (1, 1)}), 1, ((True, True),), ())
    res = check_schema(mk_barcan("e", "actualist", "BF"), m)
    assert res["holds"] and not res["sampled"]


def test_gamma_possibilist_bf_sampled():
    s5 = Frame(2, {(0, 0), (0, 1), (1, 0), (1, 1)})
    m = Model(s5, 2, ((True, True), (True, True)), ())
    for form in ("BF", "CBF"):
        res = check_schema(mk_barcan("g", "possibilist", form), m, samples=5000, seed=1)
        assert res["holds"] and res["sampled"]
        assert res["checked"] == 5000


def test_verdict_json_shape():
    v = check_entailment("anderson", "MC", Bounds(max_worlds=2, max_entities=1))
    data = v.to_json()
    assert data["tag"] == COUNTERMODEL and data["goal"] == "MC"
    assert data["model"]["worlds"] == 2
    assert "evaluated" in data["stats"]
