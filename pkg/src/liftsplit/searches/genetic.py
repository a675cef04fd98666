# -*- coding: utf-8 -*-
"""Genetic rectangle-formula witness search.

Used when the number of lifting families exceeds the candidate budget. The
fitness of a gene vector is minus the number of obstructed points, so a
fitness of 0 is a witness. Failing to reach it proves nothing, hence the
``heuristic`` mode.
"""

from collections.abc import Callable
from typing import Any


import numpy
import pygad

from liftsplit.search import WitnessSearch


__author__ = "Chariton Karamitas <huku@census-labs.com>"

__all__ = ["Genetic"]


_MULTIPLIER = 16


class Genetic(WitnessSearch):
    """Genetic witness search implementation."""

    mode = "heuristic"

    def _get_fitness_function(self) -> Callable:
        """Return a callable in the prototype PyGAD expects."""

        # pylint: disable=unused-argument
        def _fitness_function(ga: pygad.GA, genes: numpy.ndarray, i: int) -> float:
            return -float(len(self._obstructions([int(g) for g in genes])))

        return _fitness_function

    def _search(self) -> tuple[list[int] | None, dict[str, Any] | None, int]:

        num_genes = len(self._genes)
        if num_genes == 0:
            obstruction = self._obstruction([])
            return ([] if obstruction is None else None), obstruction, 1

        population = 8
        num_generations = num_genes * _MULTIPLIER

        ga = pygad.GA(
            suppress_warnings=True,
            num_generations=num_generations,
            num_parents_mating=2,
            fitness_func=self._get_fitness_function(),
            sol_per_pop=population,
            num_genes=num_genes,
            gene_type=int,
            gene_space=[list(range(len(c))) for c in self._choices],
            mutation_num_genes=1,
            stop_criteria="reach_0",
            random_seed=self._seed,
        )
        ga.run()

        best, fitness, _ = ga.best_solution()
        genes = [int(g) for g in best]
        candidates = population * (ga.generations_completed + 1)

        self._logger.debug("Best fitness %f after %d generations", fitness, ga.generations_completed)

        obstruction = self._obstruction(genes)
        if obstruction is None:
            return genes, None, candidates
        return None, obstruction, candidates
