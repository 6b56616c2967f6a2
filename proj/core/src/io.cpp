#include "spincat/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace spincat::io {

using nlohmann::json;

std::string format_double(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_double(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::runtime_error("malformed number in file: '" + s + "'");
    return v;
}

std::string m_label(int n_atoms, int index) {
    return "rho(" + format_double(index - 0.5 * n_atoms, 17) + ")";
}

json times_entry(const dynamics::CharacteristicTimes& ct) {
    json t;
    t["t_dec"] = ct.decoherence;
    t["t_diss"] = ct.dissipation;
    t["t_ncl"] = ct.nonclassical ? json(*ct.nonclassical) : json(nullptr);
    t["r"] = ct.ratio;
    return t;
}

}  // namespace

FieldData field_rows(const wigner::SphereField& field) {
    FieldData d;
    d.n_atoms = field.n_atoms;
    const auto& g = field.grid;
    d.theta.reserve(static_cast<std::size_t>(g.n_theta()) * g.n_phi());
    for (int it = 0; it < g.n_theta(); ++it)
        for (int ip = 0; ip < g.n_phi(); ++ip) {
            d.theta.push_back(g.theta[it]);
            d.phi.push_back(g.phi[ip]);
            d.weight.push_back(g.weight(it, ip));
            d.value.push_back(field.values(it, ip));
        }
    return d;
}

void write_field_csv(std::ostream& out, const FieldData& data, int precision) {
    out << "# n_atoms=" << data.n_atoms << "\n";
    out << "theta,phi,weight,value\n";
    for (std::size_t r = 0; r < data.theta.size(); ++r)
        out << format_double(data.theta[r], precision) << ','
            << format_double(data.phi[r], precision) << ','
            << format_double(data.weight[r], precision) << ','
            << format_double(data.value[r], precision) << '\n';
}

FieldData read_field_csv(std::istream& in) {
    FieldData d;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# n_atoms=", 0) != 0)
        throw std::runtime_error("field file: missing n_atoms header");
    d.n_atoms = std::stoi(line.substr(10));
    if (!std::getline(in, line) || line != "theta,phi,weight,value")
        throw std::runtime_error("field file: unexpected column header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cols = split_csv(line);
        if (cols.size() != 4) throw std::runtime_error("field file: expected 4 columns");
        d.theta.push_back(parse_double(cols[0]));
        d.phi.push_back(parse_double(cols[1]));
        d.weight.push_back(parse_double(cols[2]));
        d.value.push_back(parse_double(cols[3]));
    }
    return d;
}

std::string field_json(const wigner::SphereField& field) {
    json j;
    j["n_atoms"] = field.n_atoms;
    json grid;
    grid["theta"] = std::vector<double>(field.grid.theta.begin(), field.grid.theta.end());
    grid["theta_weight"] =
        std::vector<double>(field.grid.theta_weight.begin(), field.grid.theta_weight.end());
    grid["phi"] = std::vector<double>(field.grid.phi.begin(), field.grid.phi.end());
    grid["phi_weight"] = field.grid.phi_weight;
    j["grid"] = std::move(grid);
    json values = json::array();
    for (int it = 0; it < field.grid.n_theta(); ++it) {
        json row = json::array();
        for (int ip = 0; ip < field.grid.n_phi(); ++ip) row.push_back(field.values(it, ip));
        values.push_back(std::move(row));
    }
    j["values"] = std::move(values);
    return j.dump(2) + "\n";
}

std::string reemit_field_json(const std::string& text) { return json::parse(text).dump(2) + "\n"; }

TraceData trace_rows(const dynamics::EvolutionTrace& trace,
                     std::optional<dynamics::CharacteristicTimes> char_times) {
    TraceData d;
    d.n_atoms = trace.n_atoms;
    d.nbar = trace.bath.nbar;
    d.times = trace.times;
    const double j = 0.5 * trace.n_atoms;
    for (std::size_t s = 0; s < trace.times.size(); ++s) {
        const auto col = trace.diagonals.col(static_cast<Eigen::Index>(s));
        d.populations.emplace_back(col.begin(), col.end());
        d.re_corner.push_back(trace.corner[s].real());
        d.im_corner.push_back(trace.corner[s].imag());
        d.energy.push_back(trace.energy[s]);
        d.norm_energy.push_back(1.0 + trace.energy[s] / (-j));
        if (!trace.nu.empty()) d.nu.push_back(trace.nu[s]);
    }
    d.char_times = char_times;
    return d;
}

void write_trace_csv(std::ostream& out, const TraceData& data, int precision) {
    out << "# n_atoms=" << data.n_atoms << " nbar=" << format_double(data.nbar, precision) << "\n";
    out << "t";
    for (int i = 0; i <= data.n_atoms; ++i) out << ',' << m_label(data.n_atoms, i);
    out << ",re_corner,im_corner,energy,norm_energy";
    if (!data.nu.empty()) out << ",nu";
    out << "\n";
    for (std::size_t s = 0; s < data.times.size(); ++s) {
        out << format_double(data.times[s], precision);
        for (double p : data.populations[s]) out << ',' << format_double(p, precision);
        out << ',' << format_double(data.re_corner[s], precision) << ','
            << format_double(data.im_corner[s], precision) << ','
            << format_double(data.energy[s], precision) << ','
            << format_double(data.norm_energy[s], precision);
        if (!data.nu.empty()) out << ',' << format_double(data.nu[s], precision);
        out << '\n';
    }
    if (data.char_times) {
        out << "# t_dec=" << format_double(data.char_times->decoherence, precision) << "\n";
        out << "# t_diss=" << format_double(data.char_times->dissipation, precision) << "\n";
        out << "# t_ncl="
            << (data.char_times->nonclassical
                    ? format_double(*data.char_times->nonclassical, precision)
                    : std::string("none"))
            << "\n";
        out << "# r=" << format_double(data.char_times->ratio, precision) << "\n";
    }
}

TraceData read_trace_csv(std::istream& in) {
    TraceData d;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# n_atoms=", 0) != 0)
        throw std::runtime_error("trace file: missing preamble");
    {
        std::istringstream head(line.substr(2));
        std::string tok;
        while (head >> tok) {
            if (tok.rfind("n_atoms=", 0) == 0) d.n_atoms = std::stoi(tok.substr(8));
            if (tok.rfind("nbar=", 0) == 0) d.nbar = parse_double(tok.substr(5));
        }
    }
    if (!std::getline(in, line)) throw std::runtime_error("trace file: missing header");
    const auto header = split_csv(line);
    const bool has_nu = header.back() == "nu";
    const std::size_t expected = static_cast<std::size_t>(d.n_atoms) + 6 + (has_nu ? 1 : 0);
    if (header.size() != expected) throw std::runtime_error("trace file: unexpected column count");

    dynamics::CharacteristicTimes ct;
    bool have_ct = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = line.substr(2, eq - 2);
            const std::string val = line.substr(eq + 1);
            have_ct = true;
            if (key == "t_dec") ct.decoherence = parse_double(val);
            else if (key == "t_diss") ct.dissipation = parse_double(val);
            else if (key == "t_ncl") ct.nonclassical = (val == "none")
                                                           ? std::nullopt
                                                           : std::optional<double>(parse_double(val));
            else if (key == "r") ct.ratio = parse_double(val);
            continue;
        }
        const auto cols = split_csv(line);
        if (cols.size() != expected) throw std::runtime_error("trace file: bad row width");
        std::size_t c = 0;
        d.times.push_back(parse_double(cols[c++]));
        std::vector<double> pops;
        for (int i = 0; i <= d.n_atoms; ++i) pops.push_back(parse_double(cols[c++]));
        d.populations.push_back(std::move(pops));
        d.re_corner.push_back(parse_double(cols[c++]));
        d.im_corner.push_back(parse_double(cols[c++]));
        d.energy.push_back(parse_double(cols[c++]));
        d.norm_energy.push_back(parse_double(cols[c++]));
        if (has_nu) d.nu.push_back(parse_double(cols[c++]));
    }
    if (have_ct) d.char_times = ct;
    return d;
}

std::string trace_json(const TraceData& data) {
    json j;
    j["n_atoms"] = data.n_atoms;
    j["nbar"] = data.nbar;
    j["t"] = data.times;
    j["rho_mm"] = data.populations;
    j["re_corner"] = data.re_corner;
    j["im_corner"] = data.im_corner;
    j["energy"] = data.energy;
    j["norm_energy"] = data.norm_energy;
    if (!data.nu.empty()) j["nu"] = data.nu;
    if (data.char_times) j["characteristic_times"] = times_entry(*data.char_times);
    return j.dump(2) + "\n";
}

void write_times_csv(std::ostream& out, const std::vector<TimesRow>& rows, int precision) {
    out << "n_atoms,nbar,t_dec,t_diss,t_ncl,r\n";
    for (const auto& r : rows) {
        out << r.n_atoms << ',' << format_double(r.nbar, precision) << ','
            << format_double(r.t_dec, precision) << ',' << format_double(r.t_diss, precision)
            << ',' << (r.t_ncl ? format_double(*r.t_ncl, precision) : std::string("none")) << ','
            << format_double(r.ratio, precision) << '\n';
    }
}

std::vector<TimesRow> read_times_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "n_atoms,nbar,t_dec,t_diss,t_ncl,r")
        throw std::runtime_error("times file: unexpected header");
    std::vector<TimesRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cols = split_csv(line);
        if (cols.size() != 6) throw std::runtime_error("times file: expected 6 columns");
        TimesRow r;
        r.n_atoms = std::stoi(cols[0]);
        r.nbar = parse_double(cols[1]);
        r.t_dec = parse_double(cols[2]);
        r.t_diss = parse_double(cols[3]);
        if (cols[4] != "none") r.t_ncl = parse_double(cols[4]);
        r.ratio = parse_double(cols[5]);
        rows.push_back(r);
    }
    return rows;
}

std::string times_json(const std::vector<TimesRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json e;
        e["n_atoms"] = r.n_atoms;
        e["nbar"] = r.nbar;
        e["t_dec"] = r.t_dec;
        e["t_diss"] = r.t_diss;
        e["t_ncl"] = r.t_ncl ? json(*r.t_ncl) : json(nullptr);
        e["r"] = r.ratio;
        arr.push_back(std::move(e));
    }
    return json{{"rows", std::move(arr)}}.dump(2) + "\n";
}

void write_squeeze_csv(std::ostream& out, const SqueezeData& data, int precision) {
    out << "n_atoms,beta_deg,var_jx,var_jy,s\n";
    for (const auto& r : data.rows)
        out << r.n_atoms << ',' << format_double(r.beta_deg, precision) << ','
            << format_double(r.var_jx, precision) << ',' << format_double(r.var_jy, precision)
            << ',' << format_double(r.s, precision) << '\n';
    for (const auto& m : data.summary)
        out << "# max n_atoms=" << m.n_atoms << " beta_m_deg="
            << (m.beta_m_deg ? format_double(*m.beta_m_deg, precision) : std::string("none"))
            << " s_max=" << format_double(m.s_max, precision) << '\n';
}

SqueezeData read_squeeze_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "n_atoms,beta_deg,var_jx,var_jy,s")
        throw std::runtime_error("squeeze file: unexpected header");
    SqueezeData d;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("# max ", 0) == 0) {
            SqueezeSummary m;
            std::istringstream tail(line.substr(6));
            std::string tok;
            while (tail >> tok) {
                if (tok.rfind("n_atoms=", 0) == 0) m.n_atoms = std::stoi(tok.substr(8));
                if (tok.rfind("beta_m_deg=", 0) == 0 && tok.substr(11) != "none")
                    m.beta_m_deg = parse_double(tok.substr(11));
                if (tok.rfind("s_max=", 0) == 0) m.s_max = parse_double(tok.substr(6));
            }
            d.summary.push_back(m);
            continue;
        }
        const auto cols = split_csv(line);
        if (cols.size() != 5) throw std::runtime_error("squeeze file: expected 5 columns");
        SqueezeRow r;
        r.n_atoms = std::stoi(cols[0]);
        r.beta_deg = parse_double(cols[1]);
        r.var_jx = parse_double(cols[2]);
        r.var_jy = parse_double(cols[3]);
        r.s = parse_double(cols[4]);
        d.rows.push_back(r);
    }
    return d;
}

std::string squeeze_json(const SqueezeData& data) {
    json rows = json::array();
    for (const auto& r : data.rows)
        rows.push_back({{"n_atoms", r.n_atoms},
                        {"beta_deg", r.beta_deg},
                        {"var_jx", r.var_jx},
                        {"var_jy", r.var_jy},
                        {"s", r.s}});
    json summary = json::array();
    for (const auto& m : data.summary)
        summary.push_back({{"n_atoms", m.n_atoms},
                           {"beta_m_deg", m.beta_m_deg ? json(*m.beta_m_deg) : json(nullptr)},
                           {"s_max", m.s_max}});
    return json{{"rows", std::move(rows)}, {"summary", std::move(summary)}}.dump(2) + "\n";
}

}  // namespace spincat::io
