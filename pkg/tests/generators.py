"""Seeded random model/trajectory generators for property and oracle tests.

Deterministic given the ``random.Random`` instance, so failures are
reproducible from the seed alone.
"""

import random

from rxnflux.model import parse_model
from rxnflux.simulate import simulate


def random_model(rng: random.Random, max_species=4, max_reactions=4):
    """A small valid model: 1-2 reactants, 0-3 products, positive rates."""
    species = [f"S{i}" for i in range(rng.randint(1, max_species))]
    lines = [f"init {species[0]} * {rng.randint(1, 6)}"]
    for sp in species[1:]:
        if rng.random() < 0.5:
            lines.append(f"init {sp} * {rng.randint(1, 6)}")
    for k in range(rng.randint(1, max_reactions)):
        reactants = rng.choices(species, k=rng.choice([1, 2]))
        products = rng.choices(species, k=rng.randint(0, 3))
        rate = round(rng.uniform(0.1, 5.0), 3)
        lhs = " + ".join(reactants)
        rhs = " + ".join(products)
        lines.append(f"r{k}: {lhs} -> {rhs} @ {rate}")
    return parse_model("\n".join(lines) + "\n")


def random_trajectory(rng: random.Random, max_steps=6, **model_kwargs):
    model = random_model(rng, **model_kwargs)
    return simulate(
        model, max_steps=rng.randint(0, max_steps), seed=rng.getrandbits(63)
    )
