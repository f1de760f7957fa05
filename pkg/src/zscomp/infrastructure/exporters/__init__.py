from .csv_exporter import (
    FLOAT_FORMAT, selection_file_name, write_delta_csv, write_predictions_csv,
    write_scores_csv, write_selection_csv, write_sweep_csv, write_trial_summary_csv,
)
from .json_report import dumps_report, read_json, write_json, write_json_report

__all__ = [
    'FLOAT_FORMAT',
    'dumps_report',
    'read_json',
    'selection_file_name',
    'write_delta_csv',
    'write_json',
    'write_json_report',
    'write_predictions_csv',
    'write_scores_csv',
    'write_selection_csv',
    'write_sweep_csv',
    'write_trial_summary_csv',
]
