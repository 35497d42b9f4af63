"""Small-cell RF exposure toolkit.

Fits statistical path-loss models from drive-test measurements,
propagates them through an LTE link budget, and aggregates a
population-level Exposure Index over a street scenario.
"""

__version__ = "0.1.0"

from .distributions import (BandedPleDistribution, FixedValue,
                            GevDistribution, ScaledBetaDistribution,
                            UniformDistribution, dist_from_dict,
                            dist_to_dict, sample_ple)
from .exposure import (EiBreakdown, SarEntry, SarTable, aggregate_ei,
                       downlink_dose, uplink_dose, write_ei_report_csv,
                       write_ei_report_json)
from .fitting import (FitError, FitReport, PathLossSample, RegressionFit,
                      extract_ple_series, fit_gev, fit_log_distance,
                      fit_scaled_beta, ks_test, split_by_breakpoint)
from .ingest import (EARTH_RADIUS_M, DriveTestRecord, EmptyInputError,
                     FormatError, gps_distance, merge_records,
                     parse_drive_test, to_pathloss_samples,
                     write_normalized)
from .linkbudget import (LinkResult, RadioConfig, aperture_factor,
                         compute_link, dbm_to_watts, downlink_rsrp,
                         downlink_snr, incident_power_density,
                         rsrp_to_total_power, shannon_throughput,
                         throughput, uplink_snr, uplink_tx_power,
                         watts_to_dbm)
from .modelio import builtin_model, load_model, save_model
from .pathloss import (LTE_1800, LTE_2600, SPEED_OF_LIGHT_M_S,
                       FrequencyBand, PathLossModel, extract_ple,
                       free_space_intercept, path_loss)
from .report import (REPORT_FILES, cdf_table, emit_report_tables,
                     histogram_table)
from .runconfig import RunConfig, default_run_config, load_run_config
from .scenario import (INDOOR, OBSERVATION_COLUMNS, OUTDOOR, ObservationSet,
                       OccupancyProfile, ScenarioGeometry, UserObservation,
                       evaluate_observation, run_simulation, sample_user,
                       upload_time)
