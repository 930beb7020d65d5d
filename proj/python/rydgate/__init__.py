"""Photon-photon controlled-phase gate via stored Rydberg excitations.

Configurations are built with :func:`config`, which starts from the
working point (d = 21 um, w_par = 3 um, w_perp = 8 um, pi phase in 5 us)
and applies INI text and ``"section.key"`` overrides on top::

    import rydgate
    c = rydgate.config({"protocol.name": "swap", "interaction.t_int": "pi"})
    rydgate.zeta(c)["fidelity"]
"""

from ._core import (
    Config,
    ConfigError,
    PhysicsError,
    __version__,
    calibrate_c6,
    config,
    expansion,
    experiments,
    fidelity_from_zeta,
    gate_metrics,
    lifetime_efficiency,
    momentum_map,
    pair_efficiency,
    run_experiment,
    swap_error_average,
    thermal_efficiency,
    time_for_pi,
    zeta,
    zeta_monte_carlo,
)

__all__ = [
    "Config",
    "ConfigError",
    "PhysicsError",
    "__version__",
    "calibrate_c6",
    "config",
    "expansion",
    "experiments",
    "fidelity_from_zeta",
    "gate_metrics",
    "lifetime_efficiency",
    "momentum_map",
    "pair_efficiency",
    "run_experiment",
    "swap_error_average",
    "thermal_efficiency",
    "time_for_pi",
    "zeta",
    "zeta_monte_carlo",
]
