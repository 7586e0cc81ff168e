"""Threat modelling companion for consumer smart homes.

Library surface: CVSS v3.1 scoring (:mod:`hometm.cvss`), the bundled threat
catalog (:mod:`hometm.catalog`), the composite risk ranking
(:mod:`hometm.engine`) and report rendering (:mod:`hometm.report`). The CLI
and localhost HTTP service are thin layers over these.
"""

__version__ = "0.1.0"

from .cvss import (  # noqa: F401
    CvssVector,
    ScoreTriple,
    Severity,
    canonical_string,
    parse_vector,
    round_up,
    score,
    severity,
)
from .catalog import (  # noqa: F401
    Catalog,
    CatalogError,
    load_catalog,
    lookup,
    validate,
)
from .engine import (  # noqa: F401
    EvaluationError,
    ModelInput,
    Report,
    explain,
    score_model,
)
from .report import (  # noqa: F401
    RenderedReport,
    guidance_links,
    parse_machine,
    render,
)
