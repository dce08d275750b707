"""Reference adapters: run classifier ensembles and emit prediction files."""

from .config import AdapterConfig
from .emit import emit_mcmrc_predictions, emit_qc_predictions
from .records import InputItem, load_dataset_items, load_generation_items
from .tinymodels import build_ensemble_dirs

__version__ = "0.1.0"
