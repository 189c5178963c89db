#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "berngt/design.hpp"
#include "berngt/experiments.hpp"

namespace berngt {

inline constexpr const char* kToolName = "berngt";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kRngName = "xoshiro256** 1.0 / splitmix64";
inline constexpr int kSchemaVersion = 1;

/// 6 significant digits, '.' radix, locale independent (CSV cells).
std::string format_sig6(double v);
/// Shortest round-trip representation (JSON and canonical config values).
std::string format_full(double v);

/// One CSV row with RFC-4180 quoting where a field needs it.
void write_csv_row(std::ostream& out, std::span<const std::string> fields);

/// curve CSV: one row per (decoder, T) point.
extern const std::vector<std::string> kCurveCsvHeader;
void write_curve_csv(std::ostream& out, const SuccessCurve& curve);
std::string curve_json(const SuccessCurve& curve);

/// figure CSV: theta plus the four rate curves.
extern const std::vector<std::string> kFigureCsvHeader;
void write_figure_csv(std::ostream& out, const std::vector<Figure1Row>& rows);

void write_trial_records_jsonl(std::ostream& out, const std::vector<TrialRecord>& records);

// Design / outcome fixtures: row bits serialize as hex strings, 16 digits
// per 64-item word, word 0 (items 0..63) first, most significant nibble
// of each word first.
std::string design_json(const TestDesign& design);
TestDesign design_from_json(const std::string& text);
std::string outcomes_json(const OutcomeVector& y);
OutcomeVector outcomes_from_json(const std::string& text);

} // namespace berngt
