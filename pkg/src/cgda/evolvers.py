"""Evaluation-frugal optimizers over bounded joint-vector search spaces.

Four backends share strict true-evaluation accounting: a steady-state
tournament GA, canonical particle swarm optimization, fitness-inheritance
PSO (a share of the swarm receives a weighted average of remembered fitness
values instead of a simulation), and granulation PSO (fitness is reused from
Gaussian clusters the swarm has already paid for).

Swarm and global bests only ever come from truly evaluated candidates, so
approximation error can never be reported as a final result.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import PopulationTooSmall

EVALUATED = "evaluated"
INHERITED = "inherited"
GRANULATED = "granulated"
UNEVALUATED = "unevaluated"

SST = "sst"
PSO = "pso"
FI_PSO = "fi_pso"
AFFG_PSO = "affg_pso"
OPTIMIZER_KINDS = (SST, PSO, FI_PSO, AFFG_PSO)

FitnessFn = Callable[[np.ndarray], float]


@dataclass
class Individual:
    """Candidate joint vector with fitness provenance and PSO memory."""

    genome: np.ndarray
    fitness: float = math.inf
    provenance: str = UNEVALUATED
    velocity: np.ndarray | None = None
    best_genome: np.ndarray | None = None
    best_fitness: float = math.inf


@dataclass(frozen=True)
class OptimizerConfig:
    """Hyperparameters shared by all optimizer backends.

    Termination treats one iteration as a generation-equivalent: a sweep of
    ``population_size`` steady-state tournaments, or one swarm step. A run
    stops once the best truly evaluated fitness has failed to improve by more
    than ``zero_error_epsilon`` for ``stall_generations`` consecutive
    iterations, or as soon as it drops to ``zero_error_epsilon`` or below.
    """

    population_size: int = 50
    mutation_probability: float = 0.60
    inertia: float = 1.2
    cognitive: float = 2.0
    social: float = 2.0
    v_max: float = 5.0
    inheritance_proportion: float = 0.55
    max_granules: int = 3
    granule_sigma: float = 10.0
    granule_threshold: float = 0.6
    stall_generations: int = 3
    zero_error_epsilon: float = 1e-9
    max_iterations: int | None = None
    rng_seed: int = 0

    def __post_init__(self):
        if self.population_size < 1:
            raise ValueError("population_size must be positive")
        if not 0.0 <= self.mutation_probability <= 1.0:
            raise ValueError("mutation_probability must lie in [0, 1]")
        if not 0.0 <= self.inheritance_proportion <= 1.0:
            raise ValueError("inheritance_proportion must lie in [0, 1]")
        if self.max_granules < 0:
            raise ValueError("max_granules must be non-negative")
        if self.stall_generations < 1:
            raise ValueError("stall_generations must be positive")
        if self.zero_error_epsilon < 0:
            raise ValueError("zero_error_epsilon must be non-negative")


@dataclass
class Granule:
    """Gaussian fitness cache entry in joint space."""

    center: np.ndarray
    fitness: float
    sigma: float
    last_used: int
    order: int

    def membership(self, genome: np.ndarray) -> float:
        d2 = float(np.sum((genome - self.center) ** 2))
        return math.exp(-d2 / (2.0 * self.sigma**2))


@dataclass
class EvalBudget:
    """Counts every fitness assignment, split by how it was obtained."""

    true_evaluations: int = 0
    approximated_assignments: int = 0
    per_goal: list[int] = field(default_factory=list)

    @property
    def total_assignments(self) -> int:
        return self.true_evaluations + self.approximated_assignments


@dataclass
class Swarm:
    """Population container with the search box, RNG, and best-so-far state."""

    individuals: list[Individual]
    lower: np.ndarray
    upper: np.ndarray
    rng: np.random.Generator
    gbest_genome: np.ndarray | None = None
    gbest_fitness: float = math.inf
    step_index: int = 0
    granules: list[Granule] = field(default_factory=list)
    granule_counter: int = 0

    @property
    def size(self) -> int:
        return len(self.individuals)

    @property
    def dof(self) -> int:
        return self.lower.size


def _assign_true(swarm: Swarm, ind: Individual, fitness_fn: FitnessFn, budget: EvalBudget) -> None:
    """Truly evaluate one individual; only these updates may move the gbest."""
    ind.fitness = float(fitness_fn(ind.genome))
    ind.provenance = EVALUATED
    budget.true_evaluations += 1
    if ind.fitness < ind.best_fitness or ind.best_genome is None:
        ind.best_fitness = min(ind.fitness, ind.best_fitness)
        ind.best_genome = ind.genome.copy()
    if ind.fitness < swarm.gbest_fitness or swarm.gbest_genome is None:
        swarm.gbest_fitness = min(ind.fitness, swarm.gbest_fitness)
        swarm.gbest_genome = ind.genome.copy()


def _assign_approx(swarm: Swarm, ind: Individual, fitness: float, provenance: str,
                   budget: EvalBudget) -> None:
    ind.fitness = float(fitness)
    ind.provenance = provenance
    budget.approximated_assignments += 1
    if ind.fitness < ind.best_fitness:
        ind.best_fitness = ind.fitness
        ind.best_genome = ind.genome.copy()


def initialize_swarm(
    genomes: np.ndarray,
    fitness_fn: FitnessFn,
    lower: np.ndarray,
    upper: np.ndarray,
    rng: np.random.Generator,
    budget: EvalBudget,
) -> Swarm:
    """Clamp the genomes into the box and truly evaluate every one."""
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    individuals = [
        Individual(genome=np.clip(np.asarray(g, dtype=float), lower, upper),
                   velocity=np.zeros(lower.size))
        for g in genomes
    ]
    swarm = Swarm(individuals=individuals, lower=lower, upper=upper, rng=rng)
    for ind in individuals:
        _assign_true(swarm, ind, fitness_fn, budget)
    return swarm


def uniform_genomes(count: int, lower: np.ndarray, upper: np.ndarray,
                    rng: np.random.Generator) -> np.ndarray:
    return lower + rng.random((count, lower.size)) * (upper - lower)


def sst_generation(swarm: Swarm, fitness_fn: FitnessFn, config: OptimizerConfig,
                   budget: EvalBudget) -> Swarm:
    """One steady-state step: a 3-tournament whose loser is replaced.

    The two survivors produce a uniform-crossover child, each gene then
    mutates with ``mutation_probability`` by uniform resampling inside the
    joint box; the child is the single true evaluation of the step.
    """
    if swarm.size < 3:
        raise PopulationTooSmall("steady-state tournament needs at least 3 individuals")
    picks = swarm.rng.choice(swarm.size, size=3, replace=False)
    worst = max(picks, key=lambda i: (swarm.individuals[i].fitness, i))
    parents = [swarm.individuals[i] for i in picks if i != worst][:2]
    take_first = swarm.rng.random(swarm.dof) < 0.5
    child = np.where(take_first, parents[0].genome, parents[1].genome)
    mutate = swarm.rng.random(swarm.dof) < config.mutation_probability
    resampled = swarm.lower + swarm.rng.random(swarm.dof) * (swarm.upper - swarm.lower)
    child = np.where(mutate, resampled, child)
    offspring = Individual(genome=child, velocity=np.zeros(swarm.dof))
    _assign_true(swarm, offspring, fitness_fn, budget)
    swarm.individuals[worst] = offspring
    return swarm


def _flight(swarm: Swarm, config: OptimizerConfig) -> list[tuple[float, float]]:
    """Move every particle; returns the (r1, r2) draws used per particle."""
    gbest = swarm.gbest_genome
    coefficients = []
    for ind in swarm.individuals:
        r1 = float(swarm.rng.random())
        r2 = float(swarm.rng.random())
        coefficients.append((r1, r2))
        pbest = ind.best_genome if ind.best_genome is not None else ind.genome
        velocity = (
            config.inertia * ind.velocity
            + config.cognitive * r1 * (pbest - ind.genome)
            + config.social * r2 * (gbest - ind.genome)
        )
        ind.velocity = np.clip(velocity, -config.v_max, config.v_max)
        ind.genome = np.clip(ind.genome + ind.velocity, swarm.lower, swarm.upper)
    return coefficients


def pso_step(swarm: Swarm, fitness_fn: FitnessFn, config: OptimizerConfig,
             budget: EvalBudget) -> Swarm:
    """Canonical swarm step: inertia + cognitive + social flight, clamp,
    then a true evaluation of every particle."""
    _flight(swarm, config)
    for ind in swarm.individuals:
        _assign_true(swarm, ind, fitness_fn, budget)
    swarm.step_index += 1
    return swarm


def fi_pso_step(swarm: Swarm, fitness_fn: FitnessFn, config: OptimizerConfig,
                budget: EvalBudget) -> Swarm:
    """Swarm step where a random share of particles inherits fitness.

    The inherited value reuses the particle's own flight draws: a weighted
    average of its previous fitness, its personal best, and the swarm best,
    normalized by the weight sum. Only the remaining particles are simulated.
    """
    gbest_fitness = swarm.gbest_fitness
    coefficients = _flight(swarm, config)
    n = swarm.size
    inherit_count = math.floor(config.inheritance_proportion * n)
    inherited: frozenset[int] = frozenset()
    if inherit_count > 0:
        inherited = frozenset(swarm.rng.choice(n, size=inherit_count, replace=False).tolist())
    for i, ind in enumerate(swarm.individuals):
        if i in inherited:
            r1, r2 = coefficients[i]
            weights = config.inertia + config.cognitive * r1 + config.social * r2
            blended = (
                config.inertia * ind.fitness
                + config.cognitive * r1 * ind.best_fitness
                + config.social * r2 * gbest_fitness
            ) / weights
            _assign_approx(swarm, ind, blended, INHERITED, budget)
        else:
            _assign_true(swarm, ind, fitness_fn, budget)
    swarm.step_index += 1
    return swarm


def affg_pso_step(swarm: Swarm, fitness_fn: FitnessFn, config: OptimizerConfig,
                  budget: EvalBudget) -> Swarm:
    """Swarm step with Gaussian fitness granulation.

    A particle close enough to a stored granule (membership at or above the
    threshold) reuses its fitness; otherwise it is simulated and becomes a
    new granule, evicting the least recently used one beyond the cap.
    """
    _flight(swarm, config)
    for ind in swarm.individuals:
        best_granule = None
        best_membership = -1.0
        for granule in swarm.granules:
            membership = granule.membership(ind.genome)
            if membership > best_membership:
                best_membership = membership
                best_granule = granule
        if best_granule is not None and best_membership >= config.granule_threshold:
            best_granule.last_used = swarm.step_index
            _assign_approx(swarm, ind, best_granule.fitness, GRANULATED, budget)
            continue
        _assign_true(swarm, ind, fitness_fn, budget)
        if config.max_granules > 0:
            swarm.granule_counter += 1
            swarm.granules.append(
                Granule(
                    center=ind.genome.copy(),
                    fitness=ind.fitness,
                    sigma=config.granule_sigma,
                    last_used=swarm.step_index,
                    order=swarm.granule_counter,
                )
            )
            if len(swarm.granules) > config.max_granules:
                evict = min(range(len(swarm.granules)),
                            key=lambda k: (swarm.granules[k].last_used,
                                           swarm.granules[k].order))
                swarm.granules.pop(evict)
    swarm.step_index += 1
    return swarm


_STEPPERS = {PSO: pso_step, FI_PSO: fi_pso_step, AFFG_PSO: affg_pso_step}


@dataclass(frozen=True)
class OptimizerResult:
    """Outcome of a full optimizer run."""

    best_genome: np.ndarray
    best_fitness: float
    budget: EvalBudget
    iterations: int
    trace: tuple[float, ...]


def run_optimizer(
    kind: str,
    fitness_fn: FitnessFn,
    config: OptimizerConfig,
    lower: np.ndarray,
    upper: np.ndarray,
    rng: np.random.Generator | None = None,
    init_genomes: np.ndarray | None = None,
) -> OptimizerResult:
    """Iterate one optimizer until the stall or zero-error rule fires.

    Returns the best truly evaluated genome together with the evaluation
    budget and the per-iteration best-fitness trace (entry 0 is the state
    right after initialization).
    """
    if kind not in OPTIMIZER_KINDS:
        raise ValueError(f"unknown optimizer kind {kind!r}")
    lower = np.asarray(lower, dtype=float).ravel()
    upper = np.asarray(upper, dtype=float).ravel()
    if rng is None:
        rng = np.random.default_rng(config.rng_seed)
    budget = EvalBudget()
    n = config.population_size
    if init_genomes is None:
        genomes = uniform_genomes(n, lower, upper, rng)
    else:
        genomes = np.atleast_2d(np.asarray(init_genomes, dtype=float))
        if genomes.shape[0] < n:
            filler = uniform_genomes(n - genomes.shape[0], lower, upper, rng)
            genomes = np.vstack([genomes, filler])
        genomes = genomes[:n]
    swarm = initialize_swarm(genomes, fitness_fn, lower, upper, rng, budget)
    trace = [swarm.gbest_fitness]
    iterations = 0
    stall = 0
    epsilon = config.zero_error_epsilon
    while swarm.gbest_fitness > epsilon:
        if config.max_iterations is not None and iterations >= config.max_iterations:
            break
        previous_best = swarm.gbest_fitness
        if kind == SST:
            for _ in range(n):
                sst_generation(swarm, fitness_fn, config, budget)
        else:
            _STEPPERS[kind](swarm, fitness_fn, config, budget)
        iterations += 1
        trace.append(swarm.gbest_fitness)
        if previous_best - swarm.gbest_fitness > epsilon:
            stall = 0
        else:
            stall += 1
            if stall >= config.stall_generations:
                break
    return OptimizerResult(
        best_genome=swarm.gbest_genome.copy(),
        best_fitness=swarm.gbest_fitness,
        budget=budget,
        iterations=iterations,
        trace=tuple(trace),
    )
