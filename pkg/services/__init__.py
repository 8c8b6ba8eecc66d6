"""Services package: the numerical library behind the CLI and the workers.

Import submodules directly (`services.invariant`, `services.dynamics`, ...).
The most used entry points are also reachable from the package, loaded
lazily because `utils.linalg` and the services import each other's modules.
"""

_EXPORTS = {
	"assemble": "gqms_model",
	"make_drift_diffusion": "gqms_model",
	"make_gksl_spec": "gqms_model",
	"classify_spectrum": "spectral",
	"invariant_splitting": "spectral",
	"decide_existence": "invariant",
	"invariant_set_descriptor": "invariant",
	"normal_form": "invariant",
}


# Lazy imports to avoid circular dependencies
def __getattr__(name):
	if name in _EXPORTS:
		import importlib
		module = importlib.import_module(f"{__name__}.{_EXPORTS[name]}")
		return getattr(module, name)
	raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = list(_EXPORTS)
