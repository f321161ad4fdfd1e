"""Published measurements shipped as presets, plus access to preset files.

The crumb-loading chain is fully pinned by desk-scale measurements: the
base cookie's creme and wafer masses, and one package weighing of the
crumb-loaded product.  The coupled-pair mix-in fractions have never been
measured anywhere, so no defaults exist for them; the CLI demands them as
explicit flags.
"""

from __future__ import annotations

from importlib import resources

from .oreo import OreoParams, ell_from_package, m0_from_masses, p_from_ell

#: grams of creme in one mega-filling base cookie (kitchen-scale weighing)
MEGA_STUF_CREME_G = 10.0
#: grams of wafer in one base cookie, both biscuits together
MEGA_STUF_WAFER_G = 8.0
#: grams of filling across one 21-cookie package of the crumb-loaded product
LOADED_PACKAGE_STUF_G = 219.0
#: cookies per package in that weighing
LOADED_PACKAGE_COOKIES = 21
#: stuf mass fraction of the original cookie (magazine-published figure)
ORIGINAL_STUF_FRACTION = 0.29
#: measured filling multiplier of the double-filling variant
DOUBLE_STUF_MULTIPLIER = 1.86
#: measured filling multiplier of the mega-filling variant
MEGA_STUF_MULTIPLIER = 2.68


def default_oreo_params(c0: float = 1.0) -> OreoParams:
    """The preset parameter chain: package weighing down to the recursion."""
    ell = ell_from_package(LOADED_PACKAGE_STUF_G, LOADED_PACKAGE_COOKIES, MEGA_STUF_CREME_G)
    m0 = m0_from_masses(MEGA_STUF_CREME_G, MEGA_STUF_WAFER_G)
    p = p_from_ell(ell, m0)
    return OreoParams(ms=MEGA_STUF_CREME_G, mw=MEGA_STUF_WAFER_G, p=p, c0=c0)


def preset_names() -> list[str]:
    """Names of the data files shipped under the package's presets directory."""
    root = resources.files("infinifood") / "presets"
    return sorted(entry.name for entry in root.iterdir() if entry.is_file())


def read_preset(name: str) -> str:
    """Text of a shipped preset file; raises FileNotFoundError for bad names."""
    entry = resources.files("infinifood") / "presets" / name
    if not entry.is_file():
        raise FileNotFoundError(f"no shipped preset named {name!r}")
    return entry.read_text(encoding="utf-8")
