#pragma once

#include <string>
#include <vector>

#include "rlcore/train.hpp"

namespace rlcore {

// curve.csv column set, fixed and versioned by this exact header line.
inline constexpr const char* kCurveCsvHeader =
    "env_step,eval_return_mean,eval_return_sd,critic_loss,actor_loss,alpha,wall_ms";

inline constexpr const char* kAggregateCsvHeader =
    "axis_value,final_return_mean,final_return_sd,num_seeds";

/// Doubles formatted with max_digits10 so equal doubles give equal text.
std::string format_double(double v);

/// RFC-4180-style field quoting (applied only when the field needs it).
std::string csv_escape(const std::string& field);

std::string curve_row_to_csv(const CurveRow& row);
void write_curve_csv(const std::string& path, const LearningCurve& curve);

/// Minimal RFC-4180 reader: quoted fields, doubled quotes, one record per line.
std::vector<std::vector<std::string>> read_csv_file(const std::string& path);

/// Parses a curve.csv produced by this library; validates the header.
LearningCurve read_curve_csv(const std::string& path);

} // namespace rlcore
