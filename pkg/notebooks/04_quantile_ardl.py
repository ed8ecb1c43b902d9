# %% [markdown]
# # Quantile ARDL across the conditional distribution
#
# Each quantile is fit on the error-correction design by linear
# programming.  Kernel (Powell sandwich) standard errors are the default;
# the pairs bootstrap is available with `se="bootstrap"`.

# %%
from pathlib import Path

from qardl.ardl import select_lags
from qardl.config import load_config, load_panel
from qardl.quantile_ardl import confidence_bands, fit_qardl

ROOT = Path(__file__).resolve().parents[1] if "__file__" in globals() else Path.cwd().parent
panel = load_panel(load_config(ROOT / "configs" / "demo.json"))
spec = select_lags(panel, 3, 2)

# %%
fits = fit_qardl(panel, spec, quantiles=(0.1, 0.25, 0.5, 0.75, 0.9))
for rec in fits:
    lr = ", ".join(f"{panel.name_of(r)} {e.value:7.4f}{e.stars}" for r, e in rec.long_run.items())
    print(f"gamma {rec.quantile:.2f}  rho* {rec.rho.value:8.4f}{rec.rho.stars:3s}  {lr}")

# %% [markdown]
# Confidence bands in long format, one row per parameter and quantile.

# %%
for row in confidence_bands(fits, 0.95):
    if row.parameter == "rho*":
        print(f"{row.gamma:.2f}  [{row.lo:8.4f}, {row.hi:8.4f}]")

# %%
boot = fit_qardl(panel, spec, quantiles=(0.5,), se="bootstrap", n_boot=200, seed=1)[0.5]
print("rho* se: kernel", f"{fits[0.5].rho.std_error:.4f}", " bootstrap", f"{boot.rho.std_error:.4f}")
