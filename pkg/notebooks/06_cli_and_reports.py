# %% [markdown]
# # Command line and saved artifacts
#
# Every command writes a JSON document plus text and CSV renderings.  The
# `report` command regenerates all of them from the JSON alone.

# %%
import tempfile
from pathlib import Path

from qardl.cli import main

ROOT = Path(__file__).resolve().parents[1] if "__file__" in globals() else Path.cwd().parent
out = Path(tempfile.mkdtemp())
main(["fit", "--config", str(ROOT / "configs" / "demo.json"), "--quantiles", "0.25,0.5,0.75", "--out", str(out)])

# %%
print(sorted(p.name for p in out.iterdir()))
print((out / "bands.csv").read_text().splitlines()[:4])

# %%
again = out.parent / (out.name + "-again")
main(["report", str(out / "fit.json"), "--out", str(again)])
print(all((out / p.name).read_bytes() == p.read_bytes() for p in again.iterdir()))

# %% [markdown]
# Errors are JSON records on stderr with exit codes 2 (config), 3 (data)
# and 4 (estimation).

# %%
print("exit code:", main(["describe", "--config", str(out / "missing.json")]))
