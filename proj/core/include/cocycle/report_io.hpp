#pragma once

#include <string>
#include <vector>

#include "cocycle/approx.hpp"
#include "cocycle/oseledets.hpp"

namespace cocycle {

/// Byte-stable compact JSON writer. Doubles print with 17 significant
/// digits; infinities and NaN become the strings "-inf", "inf", "nan".
class JsonWriter {
public:
    void begin_object();
    void end_object();
    void begin_array();
    void end_array();
    void key(const std::string& name);
    void value(double v);
    void value(int v) { value(static_cast<long long>(v)); }
    void value(long long v);
    void value(bool v);
    void value(const std::string& v);
    void value(const char* v) { value(std::string(v)); }

    const std::string& str() const { return out_; }

private:
    void comma();
    std::string out_;
    std::vector<bool> first_;
    bool after_key_ = false;
};

std::string format_double(double v); // 17 significant digits

struct ReportHeader {
    std::string command;
    std::vector<std::string> overrides;
};

std::string spectrum_to_json(const ErgodicSpectrum& s, const ReportHeader& header);
ErgodicSpectrum parse_spectrum_json(const std::string& text);

std::string splitting_to_json(const SplittingEstimate& s, const ReportHeader& header);
SplittingEstimate parse_splitting_json(const std::string& text);

std::string report_to_json(const ApproximationReport& r, const ReportHeader& header);
ApproximationReport parse_report_json(const std::string& text);

/// Orbit table with exponent blocks and the invariant subspace bases at
/// every orbit point.
std::string periodic_table_to_json(const std::vector<PeriodicData>& table,
                                   const ReportHeader& header);

/// One row per period: scores, errors, angle quantiles and good fractions.
std::string report_to_csv(const ApproximationReport& r);

std::string closing_to_json(const ClosingReport& r, const ReportHeader& header);

} // namespace cocycle
