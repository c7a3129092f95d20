#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tag/study.hpp"

namespace tag {

enum class ReportFormat { csv, json };

ReportFormat parse_report_format(std::string_view s);

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CSV files (per study):
//   <study>_trials.csv   study,cell,seed,preset,duration,wearable_bits,device_bits,attacker_bits,
//                        wearable_key,device_key,keys_matched,paired,fallback,attempts,elapsed
//   <study>_cells.csv    study,cell,base_seed,trials,bmr_raw,bmr_reconciled,success_rate,mean_attempts,
//                        bit_rate_raw,bit_rate_reconciled,mi_wearable,mi_device,attacker_bmr,
//                        spectrum_corr_legit,spectrum_corr_attacker
//   <study>_entropy.csv  study,base_seed,kind,index,entropy      (kind: code | key_bit)
//   <study>_distance.csv distance,base_seed,mi_wearable,mi_device,attacker_bmr   (eavesdrop studies)
//   <study>_nist.csv     test,base_seed,bits,p_value,pass                        (randomness study)
// JSON: <study>.json holding the same content under "spec", "cells", "trials",
// "code_entropy", "key_bit_entropy" and "randomness". Absent values are empty
// CSV fields and JSON null. Returns the paths written.
std::vector<std::string> emit_report(const StudyResult& result, const std::string& out_dir, ReportFormat format);

// Both formats.
std::vector<std::string> emit_reports(const StudyResult& result, const std::string& out_dir);

// Columns time_s, accel_magnitude.
void write_trace_csv(const AccelTrace& trace, const std::string& path);

std::string format_double(double v);

}  // namespace tag
