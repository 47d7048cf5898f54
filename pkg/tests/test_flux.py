import random
from collections import Counter

import pytest

from rxnflux.causality import extract_configuration, restrict_interval
from rxnflux.errors import FluxConsistencyError
from rxnflux.flux import (
    FluxConfiguration,
    NetFluxGraph,
    flux_configuration,
    flux_from_json,
    flux_to_json,
    mass_balance,
    net_flux,
    reaction_fire_counts,
    threshold_filter,
)
from rxnflux.model import parse_model
from rxnflux.simulate import simulate
from rxnflux.traceio import parse_trace

from generators import random_trajectory
from oracles import fires_by_shape, steps_in_interval

REFERENCE_FLUX = {
    ("init", "r1"): 4,
    ("r1", "r2"): 5,
    ("r1", "r3"): 3,
    ("r2", "r4"): 3,
    ("r3", "r4"): 3,
}


@pytest.fixture(scope="module")
def reference_traj(reference_trace, diamond):
    return parse_trace(reference_trace, diamond)


@pytest.fixture(scope="module")
def reference_flux(reference_traj):
    return flux_configuration(extract_configuration(reference_traj))


def test_reference_flux_exact(reference_flux):
    assert reference_flux.triples == REFERENCE_FLUX


def test_weight_conservation(reference_traj, reference_flux):
    config = extract_configuration(reference_traj)
    assert sum(reference_flux.triples.values()) == len(config.edges)


def test_weight_conservation_random():
    rng = random.Random(5)
    for _ in range(30):
        config = extract_configuration(random_trajectory(rng))
        flux = flux_configuration(config)
        assert sum(flux.triples.values()) == len(config.edges)
        assert all(n >= 1 for n in flux.triples.values())


def test_empty_configuration_empty_flux(diamond):
    config = extract_configuration(parse_trace("0.  --> A(1)\n", diamond))
    assert flux_configuration(config).triples == {}


def test_net_flux_difference():
    net = net_flux(FluxConfiguration({("p", "q"): 5, ("q", "p"): 3}))
    assert net.triples == {("p", "q"): 2}


def test_net_flux_exact_cancellation():
    assert net_flux(FluxConfiguration({("p", "q"): 4, ("q", "p"): 4})).triples == {}


def test_net_flux_self_loop_passes():
    assert net_flux(FluxConfiguration({("p", "p"): 7})).triples == {("p", "p"): 7}


def test_net_flux_opposing_pair_large():
    flux = FluxConfiguration({("RTE_RT", "RT_RTE"): 2093, ("RT_RTE", "RTE_RT"): 2092})
    assert net_flux(flux).triples == {("RTE_RT", "RT_RTE"): 1}


def test_net_flux_idempotent(reference_flux):
    once = net_flux(reference_flux)
    again = net_flux(once)
    assert again.triples == once.triples


def test_threshold_arithmetic():
    flux = FluxConfiguration({("a", "b"): 100, ("b", "c"): 1})
    kept = threshold_filter(flux, 0.1)  # mean 50.5, cutoff 5.05
    assert kept.triples == {("a", "b"): 100}


def test_threshold_zero_is_identity(reference_flux):
    assert threshold_filter(reference_flux, 0.0).triples == reference_flux.triples


def test_threshold_monotone(reference_flux):
    previous = set(reference_flux.triples)
    for fraction in [0.0, 0.5, 1.0, 1.2, 5.0]:
        kept = set(threshold_filter(reference_flux, fraction).triples)
        assert kept <= previous
        previous = kept


def test_threshold_exclude_init(reference_flux):
    kept = threshold_filter(reference_flux, 0.0, exclude_init=True)
    assert ("init", "r1") not in kept.triples
    assert len(kept.triples) == 4
    # init weights do not drag the mean: triples 5,3,3,3 -> mean 3.5
    tight = threshold_filter(reference_flux, 1.1, exclude_init=True)
    assert tight.triples == {("r1", "r2"): 5}


def test_threshold_empty_flux():
    assert threshold_filter(FluxConfiguration({}), 0.1).triples == {}
    only_init = FluxConfiguration({("init", "r1"): 4})
    assert threshold_filter(only_init, 0.1, exclude_init=True).triples == {}


def test_mass_balance_reference(reference_flux, diamond):
    assert mass_balance(reference_flux, diamond) == {
        "A": -4,
        "B": 2,
        "C": 0,
        "D": 3,
        "P": 0,
    }


def test_mass_balance_matches_replay(reference_traj, reference_flux, diamond):
    from oracles import final_species_counts

    final = final_species_counts(reference_traj)
    initial = Counter(i.species for i in reference_traj.initial)
    balance = mass_balance(reference_flux, diamond)
    for sp in diamond.species:
        assert balance[sp] == final.get(sp, 0) - initial.get(sp, 0)


def test_mass_balance_empty_flux(diamond):
    assert mass_balance(FluxConfiguration({}), diamond) == {
        sp: 0 for sp in diamond.species
    }


def test_mass_balance_divide_evenly():
    model = parse_model("init A * 4\nd: A + A -> B @ 1.0\n")
    flux = FluxConfiguration({("init", "d"): 3})
    with pytest.raises(FluxConsistencyError) as err:
        mass_balance(flux, model)
    assert "d" in str(err.value)


def test_mass_balance_unknown_label(diamond):
    with pytest.raises(ValueError):
        mass_balance(FluxConfiguration({("init", "nope"): 1}), diamond)


def test_fire_counts_reference(reference_traj, reference_trace):
    counts = reaction_fire_counts(reference_traj)
    assert counts == {"r1": 4, "r2": 5, "r3": 3, "r4": 3}
    assert counts["r1"] == fires_by_shape(reference_trace, ["A"], ["P", "P"])
    assert counts["r4"] == fires_by_shape(reference_trace, ["B", "C"], ["D"])


def test_fire_counts_empty(diamond):
    trajectory = parse_trace("0.  --> A(1)\n", diamond)
    assert reaction_fire_counts(trajectory) == {"r1": 0, "r2": 0, "r3": 0, "r4": 0}


def test_fire_counts_interval(reference_traj, reference_trace):
    counts = reaction_fire_counts(reference_traj, (1.0, 2.0))
    assert sum(counts.values()) == len(steps_in_interval(reference_trace, 1.0, 2.0))
    whole = reaction_fire_counts(reference_traj)
    lo = reaction_fire_counts(reference_traj, (0.0, 1.0))
    hi = reaction_fire_counts(reference_traj, (1.0, reference_traj.horizon))
    assert {r: lo[r] + hi[r] for r in whole} == whole


def test_interval_partition_triple_wise(rho):
    trajectory = simulate(rho, t_end=0.1, seed=17)
    config = extract_configuration(trajectory)
    whole = flux_configuration(restrict_interval(config, 0.0, 0.1))
    left = flux_configuration(restrict_interval(config, 0.0, 0.05))
    right = flux_configuration(restrict_interval(config, 0.05, 0.1))
    summed = Counter(left.triples) + Counter(right.triples)
    assert dict(summed) == whole.triples


def test_json_round_trip(reference_flux):
    text = flux_to_json(reference_flux)
    assert flux_from_json(text).triples == reference_flux.triples
    net = net_flux(reference_flux)
    assert flux_from_json(flux_to_json(net)).triples == net.triples


def test_json_validation():
    with pytest.raises(ValueError):
        flux_from_json('{"from": "a"}')
    with pytest.raises(ValueError):
        flux_from_json('[{"from": "a", "to": "b"}]')
    with pytest.raises(ValueError):
        flux_from_json('[{"from": "a", "to": "b", "n": 0}]')
    with pytest.raises(ValueError):
        flux_from_json('[{"from": "a", "to": "b", "n": 1.5}]')
    with pytest.raises(ValueError):
        flux_from_json(
            '[{"from": "a", "to": "b", "n": 1}, {"from": "a", "to": "b", "n": 2}]'
        )


def test_items_sorted(reference_flux):
    items = reference_flux.items()
    assert items == sorted(items)
    assert isinstance(net_flux(reference_flux), NetFluxGraph)
