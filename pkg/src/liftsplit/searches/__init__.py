# -*- coding: utf-8 -*-
# pylint: disable=missing-module-docstring

from liftsplit.searches.brute_force import Exhaustive
from liftsplit.searches.genetic import Genetic
