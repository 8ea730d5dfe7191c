"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
@description: parallel execution of independent solves and marches
"""

import logging
import multiprocessing as mp
from typing import Any, Callable, List, Sequence

from joblib import Parallel, delayed  # type: ignore
from tqdm import tqdm  # type: ignore

from midparent.config import Config
from midparent.density import DensityState
from midparent.fixed_point import StationarySolution, picard_solve
from midparent.errors import ConfigurationError
from midparent.march import MarchResult, dt_max, run_to_equilibrium
from midparent.mortality import MortalityModel


class Runner:
    """Runs independent jobs inline or on a joblib pool.

    Results always come back in input order.

    Variables:
            __threads {int} -- number of workers
    """

    __threads = 1

    def __init__(self, threads: int = 1):
        """Initialize Runner.

        :param threads: for parallelization, defaults to 1
        :type threads: int
        """
        super().__init__()
        self.threads = threads

    @property
    def threads(self) -> int:
        return self.__threads

    @threads.setter
    def threads(self, t: int) -> None:
        self.__threads = max(1, min(t, mp.cpu_count()))

    def map(
        self, func: Callable[..., Any], jobs: Sequence[Any], desc: str = "Running"
    ) -> List[Any]:
        """Apply func to each job.

        :param func: picklable function of one argument
        :type func: Callable[..., Any]
        :param jobs: arguments
        :type jobs: Sequence[Any]
        :param desc: progress bar label, defaults to "Running"
        :type desc: str
        :return: results, in input order
        :rtype: List[Any]
        """
        if self.threads == 1 or len(jobs) < 2:
            return [func(job) for job in tqdm(jobs, desc=desc)]
        logging.info(f"{desc} {len(jobs)} jobs on {self.threads} threads")
        return Parallel(n_jobs=min(self.threads, len(jobs)), verbose=11)(
            delayed(func)(job) for job in jobs
        )


def _solve(job) -> StationarySolution:
    model, eps, cfg = job
    return picard_solve(model, eps, cfg.with_eps(eps))


def _march(job) -> MarchResult:
    model, center, cfg = job
    eps = cfg.solver.eps
    init = DensityState.gaussian(cfg.discretization.density_grid, eps, center)
    result = run_to_equilibrium(init, model, eps, cfg.march)
    result.center = center
    return result


def solve_sweep(
    model: MortalityModel, cfg: Config, threads: int = 1
) -> List[StationarySolution]:
    """Stationary solves for every eps of the sweep section."""
    jobs = [(model, eps, cfg) for eps in cfg.sweep.eps]
    return Runner(threads).map(_solve, jobs, "Solving")


def march_all(model: MortalityModel, cfg: Config, threads: int = 1) -> List[MarchResult]:
    """One time march per configured initial center.

    :raises ConfigurationError: if the configured dt exceeds dt_max
    """
    limit = dt_max(model, cfg.discretization.density_grid)
    if cfg.march.dt is not None and cfg.march.dt > limit:
        raise ConfigurationError(
            f"time step {cfg.march.dt:.4g} violates the stability bound "
            f"dt_max={limit:.4g}",
            "march",
        )
    jobs = [(model, center, cfg) for center in cfg.march.centers]
    return Runner(threads).map(_march, jobs, "Marching")
