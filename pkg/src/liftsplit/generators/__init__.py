# -*- coding: utf-8 -*-
# pylint: disable=missing-module-docstring

from liftsplit.generators.diag import Diag
from liftsplit.generators.no_rf import NoRF
from liftsplit.generators.random_scenario import RandomScenario
