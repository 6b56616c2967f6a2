#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spincat/dynamics.hpp"
#include "spincat/squeezing.hpp"
#include "spincat/wigner.hpp"

// Deterministic, byte-stable file formats: CSV with '.' decimal separator,
// LF line endings, a header row and %.{p}g floats (p significant digits,
// 17 by default so values round-trip exactly); JSON uses shortest
// round-trip number formatting and a fixed 2-space indent.  Every writer has
// a reader and re-emitting a parsed file reproduces it byte for byte.
namespace spincat::io {

std::string format_double(double v, int precision = 17);

// ---- Wigner field: rows (theta, phi, weight, value), theta-major ----
struct FieldData {
    int n_atoms = 0;
    std::vector<double> theta, phi, weight, value;
};

FieldData field_rows(const wigner::SphereField& field);
void write_field_csv(std::ostream& out, const FieldData& data, int precision = 17);
FieldData read_field_csv(std::istream& in);
std::string field_json(const wigner::SphereField& field);
std::string reemit_field_json(const std::string& text);

// ---- evolution trace ----
struct TraceData {
    int n_atoms = 0;
    double nbar = 0.0;
    std::vector<double> times;
    std::vector<std::vector<double>> populations;  // per sample, N+1 entries
    std::vector<double> re_corner, im_corner, energy, norm_energy;
    std::vector<double> nu;  // empty unless computed
    std::optional<dynamics::CharacteristicTimes> char_times;
};

TraceData trace_rows(const dynamics::EvolutionTrace& trace,
                     std::optional<dynamics::CharacteristicTimes> char_times = std::nullopt);
void write_trace_csv(std::ostream& out, const TraceData& data, int precision = 17);
TraceData read_trace_csv(std::istream& in);
std::string trace_json(const TraceData& data);

// ---- characteristic-times table ----
struct TimesRow {
    int n_atoms = 0;
    double nbar = 0.0;
    double t_dec = 0.0;
    double t_diss = 0.0;
    std::optional<double> t_ncl;
    double ratio = 0.0;
};

void write_times_csv(std::ostream& out, const std::vector<TimesRow>& rows, int precision = 17);
std::vector<TimesRow> read_times_csv(std::istream& in);
std::string times_json(const std::vector<TimesRow>& rows);

// ---- squeezing sweep ----
struct SqueezeRow {
    int n_atoms = 0;
    double beta_deg = 0.0;
    double var_jx = 0.0;
    double var_jy = 0.0;
    double s = 0.0;
};
struct SqueezeSummary {
    int n_atoms = 0;
    std::optional<double> beta_m_deg;  // absent for N = 1
    double s_max = 0.0;
};
struct SqueezeData {
    std::vector<SqueezeRow> rows;
    std::vector<SqueezeSummary> summary;
};

void write_squeeze_csv(std::ostream& out, const SqueezeData& data, int precision = 17);
SqueezeData read_squeeze_csv(std::istream& in);
std::string squeeze_json(const SqueezeData& data);

}  // namespace spincat::io
