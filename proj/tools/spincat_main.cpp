// spincat: batch CLI emitting plot-ready data for collective-spin cat states:
// Wigner fields on the Bloch sphere, squeezing sweeps, master-equation traces
// and characteristic-time tables.
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spincat/dynamics.hpp"
#include "spincat/errors.hpp"
#include "spincat/io.hpp"
#include "spincat/squeezing.hpp"
#include "spincat/states.hpp"
#include "spincat/wigner.hpp"

namespace {

using namespace spincat;

constexpr double kDegree = M_PI / 180.0;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Accepts both key=value (INI) files and JSON objects; nested JSON objects
// map onto subcommand sections.
class FlexibleConfig : public CLI::ConfigBase {
public:
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        std::stringstream buffer;
        buffer << input.rdbuf();
        const std::string text = buffer.str();
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && text[first] == '{') {
            std::vector<CLI::ConfigItem> out;
            flatten(nlohmann::json::parse(text), {}, out);
            return out;
        }
        std::istringstream ini(text);
        return CLI::ConfigBase::from_config(ini);
    }

private:
    static std::string scalar(const nlohmann::json& v) {
        return v.is_string() ? v.get<std::string>() : v.dump();
    }

    static void flatten(const nlohmann::json& j, std::vector<std::string> parents,
                        std::vector<CLI::ConfigItem>& out) {
        for (const auto& [key, val] : j.items()) {
            if (val.is_object()) {
                auto deeper = parents;
                deeper.push_back(key);
                flatten(val, deeper, out);
            } else {
                CLI::ConfigItem item;
                item.parents = parents;
                item.name = key;
                if (val.is_array())
                    for (const auto& e : val) item.inputs.push_back(scalar(e));
                else
                    item.inputs.push_back(scalar(val));
                out.push_back(std::move(item));
            }
        }
    }
};

struct OutputOpts {
    std::string path = "-";
    std::string format = "csv";
    int precision = 17;
};

void add_output_opts(CLI::App* cmd, OutputOpts& o) {
    cmd->add_option("-o,--output", o.path, "output file, '-' for stdout")->capture_default_str();
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--precision", o.precision, "significant digits in CSV floats")
        ->check(CLI::Range(1, 17))
        ->capture_default_str();
}

void emit(const OutputOpts& o, const std::string& content) {
    if (o.path == "-") {
        std::cout << content;
        std::cout.flush();
        if (!std::cout) throw IoError("failed writing to stdout");
        return;
    }
    std::ofstream file(o.path, std::ios::binary);
    if (!file) throw IoError("cannot open output file: " + o.path);
    file << content;
    file.flush();
    if (!file) throw IoError("failed writing output file: " + o.path);
}

unsigned worker_count(std::size_t jobs) {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SPINCAT_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min<long>(n, cap);
    }
    return static_cast<unsigned>(std::min<std::size_t>(n, jobs));
}

// ---------------------------------------------------------------- wigner ---
struct WignerArgs {
    std::string state;
    int atoms = 0;
    double beta_deg = 0.0;
    double alpha_deg = 0.0;
    int n_theta = 0;
    int n_phi = 0;
    int oversample = 4;
    OutputOpts out;
};

void run_wigner(const WignerArgs& a) {
    states::DensityMatrix rho;
    if (a.state == "polar") {
        rho = states::density_of(states::polar_cat(a.atoms));
    } else if (a.state == "nonpolar") {
        rho = states::density_of(states::nonpolar_cat(a.atoms, a.beta_deg * kDegree));
    } else {
        rho = states::density_of(
            states::coherent_state(a.atoms, a.beta_deg * kDegree, a.alpha_deg * kDegree));
    }
    const auto grid = (a.n_theta > 0 && a.n_phi > 0)
                          ? wigner::sphere_grid(a.n_theta, a.n_phi)
                          : wigner::default_grid(a.atoms, a.oversample);
    const auto field = wigner::wigner_field(wigner::characteristic_matrix(rho), grid);
    if (a.out.format == "json") {
        emit(a.out, io::field_json(field));
    } else {
        std::ostringstream csv;
        io::write_field_csv(csv, io::field_rows(field), a.out.precision);
        emit(a.out, csv.str());
    }
}

// --------------------------------------------------------------- squeeze ---
struct SqueezeArgs {
    std::vector<int> atoms;
    double beta_min_deg = 0.0;
    double beta_max_deg = 90.0;
    int beta_steps = 181;
    OutputOpts out;
};

void run_squeeze(const SqueezeArgs& a) {
    auto atoms = a.atoms;
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    if (a.beta_steps < 2) throw std::domain_error("squeeze: need at least two beta samples");

    io::SqueezeData data;
    for (int n : atoms) {
        for (int k = 0; k < a.beta_steps; ++k) {
            const double beta_deg =
                a.beta_min_deg + (a.beta_max_deg - a.beta_min_deg) * k / (a.beta_steps - 1);
            const auto rep = squeeze::report(n, beta_deg * kDegree);
            data.rows.push_back({n, beta_deg, rep.var_jx, rep.var_jy, rep.s_measure});
        }
        io::SqueezeSummary summary;
        summary.n_atoms = n;
        if (n >= 2) {
            const auto mx = squeeze::max_squeezing(n);
            summary.beta_m_deg = mx.beta_m / kDegree;
            summary.s_max = mx.s_max;
        } else {
            summary.s_max = 0.0;  // a single atom never squeezes
        }
        data.summary.push_back(summary);
    }
    if (a.out.format == "json") {
        emit(a.out, io::squeeze_json(data));
    } else {
        std::ostringstream csv;
        io::write_squeeze_csv(csv, data, a.out.precision);
        emit(a.out, csv.str());
    }
}

// ---------------------------------------------------------------- evolve ---
struct EvolveArgs {
    int atoms = 0;
    double nbar = 0.0;
    double horizon = 0.0;  // 0 = automatic (horizon_factor * t_diss)
    double horizon_factor = 5.0;
    int samples = 401;
    bool with_nu = false;
    OutputOpts out;
};

void run_evolve(const EvolveArgs& a) {
    dynamics::BathParams bath{a.nbar};
    dynamics::EvolveOptions opts;
    opts.horizon_factor = a.horizon_factor;
    auto trace = dynamics::evolve_polar_cat(a.atoms, bath, a.horizon, a.samples, opts);

    dynamics::CharacteristicTimes ct;
    ct.decoherence = dynamics::t_dec(a.atoms, bath);
    ct.dissipation = dynamics::t_diss(trace);
    ct.nonclassical = dynamics::t_ncl(trace);
    ct.ratio = ct.dissipation / ct.decoherence;

    if (a.with_nu) {
        trace.nu.reserve(trace.times.size());
        for (double t : trace.times)
            trace.nu.push_back(
                wigner::nonclassicality_converged(dynamics::characteristic_at(trace, t)));
    }

    const auto data = io::trace_rows(trace, ct);
    if (a.out.format == "json") {
        emit(a.out, io::trace_json(data));
    } else {
        std::ostringstream csv;
        io::write_trace_csv(csv, data, a.out.precision);
        emit(a.out, csv.str());
    }
}

// ----------------------------------------------------------- times/sweep ---
struct TimesArgs {
    std::vector<int> atoms;
    std::vector<double> nbars;
    std::vector<int> atoms_log;  // lo hi count
    OutputOpts out;
};

std::vector<std::pair<int, double>> times_jobs(const TimesArgs& a) {
    std::vector<int> atoms = a.atoms;
    if (!a.atoms_log.empty()) {
        const int lo = a.atoms_log[0], hi = a.atoms_log[1], count = a.atoms_log[2];
        if (lo < 1 || hi < lo || count < 2)
            throw std::domain_error("atoms-log: need 1 <= lo <= hi and count >= 2");
        for (int k = 0; k < count; ++k) {
            const double x = std::log(static_cast<double>(lo)) +
                             (std::log(static_cast<double>(hi)) - std::log(static_cast<double>(lo))) *
                                 k / (count - 1);
            atoms.push_back(static_cast<int>(std::lround(std::exp(x))));
        }
    }
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    if (atoms.empty()) throw std::domain_error("no atom counts given");

    std::vector<double> nbars = a.nbars;
    std::sort(nbars.begin(), nbars.end());
    nbars.erase(std::unique(nbars.begin(), nbars.end()), nbars.end());
    if (nbars.empty()) throw std::domain_error("no nbar values given");

    std::vector<std::pair<int, double>> jobs;
    for (int n : atoms)
        for (double nb : nbars) jobs.emplace_back(n, nb);
    return jobs;
}

io::TimesRow times_row(int n_atoms, double nbar) {
    const dynamics::BathParams bath{nbar};
    const auto ct = dynamics::characteristic_times(n_atoms, bath);
    io::TimesRow row;
    row.n_atoms = n_atoms;
    row.nbar = nbar;
    row.t_dec = ct.decoherence;
    row.t_diss = ct.dissipation;
    row.t_ncl = ct.nonclassical;
    row.ratio = ct.ratio;
    return row;
}

void emit_times(const OutputOpts& out, const std::vector<io::TimesRow>& rows) {
    if (out.format == "json") {
        emit(out, io::times_json(rows));
    } else {
        std::ostringstream csv;
        io::write_times_csv(csv, rows, out.precision);
        emit(out, csv.str());
    }
}

void run_times(const TimesArgs& a) {
    const auto jobs = times_jobs(a);
    std::vector<io::TimesRow> rows;
    rows.reserve(jobs.size());
    for (const auto& [n, nb] : jobs) rows.push_back(times_row(n, nb));
    emit_times(a.out, rows);
}

void run_sweep(const TimesArgs& a) {
    const auto jobs = times_jobs(a);
    std::vector<io::TimesRow> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    const unsigned workers = worker_count(jobs.size());
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            while (true) {
                const std::size_t k = next.fetch_add(1);
                if (k >= jobs.size()) return;
                try {
                    rows[k] = times_row(jobs[k].first, jobs[k].second);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    // rows were filled by job index, already sorted by (N, nbar)
    emit_times(a.out, rows);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "spincat: Wigner functions, squeezing and decoherence timescales of\n"
        "collective two-level-atom cat states (angles in degrees)"};
    app.set_config("--config", "", "configuration file, key=value or JSON; flags take precedence");
    app.config_formatter(std::make_shared<FlexibleConfig>());
    app.allow_config_extras(false);
    app.require_subcommand(1);

    WignerArgs wa;
    auto* wigner_cmd = app.add_subcommand(
        "wigner", "sample a state's Wigner function on a sphere grid (theta,phi,weight,value)");
    wigner_cmd->add_option("--state", wa.state, "polar | nonpolar | coherent")
        ->required()
        ->check(CLI::IsMember({"polar", "nonpolar", "coherent"}));
    wigner_cmd->add_option("--atoms", wa.atoms, "number of atoms N")->required()->check(CLI::PositiveNumber);
    wigner_cmd->add_option("--beta", wa.beta_deg, "polar angle beta in degrees (from the south pole)")
        ->check(CLI::Range(0.0, 180.0))
        ->capture_default_str();
    wigner_cmd->add_option("--alpha", wa.alpha_deg, "azimuth alpha in degrees (coherent state)")
        ->capture_default_str();
    wigner_cmd->add_option("--n-theta", wa.n_theta, "theta nodes (0 = derive from N)")->capture_default_str();
    wigner_cmd->add_option("--n-phi", wa.n_phi, "phi nodes (0 = derive from N)")->capture_default_str();
    wigner_cmd->add_option("--oversample", wa.oversample, "grid oversampling factor")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_output_opts(wigner_cmd, wa.out);
    wigner_cmd->callback([&] { run_wigner(wa); });

    SqueezeArgs sa;
    auto* squeeze_cmd =
        app.add_subcommand("squeeze", "squeezing measure S(beta) curves and their maxima");
    squeeze_cmd->add_option("--atoms", sa.atoms, "atom counts (repeatable)")->required();
    squeeze_cmd->add_option("--beta-min", sa.beta_min_deg, "start of the beta grid, degrees")
        ->capture_default_str();
    squeeze_cmd->add_option("--beta-max", sa.beta_max_deg, "end of the beta grid, degrees")
        ->capture_default_str();
    squeeze_cmd->add_option("--beta-steps", sa.beta_steps, "number of beta samples")
        ->capture_default_str();
    add_output_opts(squeeze_cmd, sa.out);
    squeeze_cmd->callback([&] { run_squeeze(sa); });

    EvolveArgs ea;
    auto* evolve_cmd = app.add_subcommand(
        "evolve", "finite-temperature evolution of a polar cat (trace of rho_mm, corner, energy)");
    evolve_cmd->add_option("--atoms", ea.atoms, "number of atoms N")->required()->check(CLI::PositiveNumber);
    evolve_cmd->add_option("--nbar", ea.nbar, "mean photon number of the bath")
        ->required()
        ->check(CLI::NonNegativeNumber);
    evolve_cmd->add_option("--horizon", ea.horizon, "time horizon in 1/gamma (0 = automatic)")
        ->capture_default_str();
    evolve_cmd->add_option("--horizon-factor", ea.horizon_factor,
                           "automatic horizon = factor * t_diss")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    evolve_cmd->add_option("--samples", ea.samples, "number of uniform samples")
        ->check(CLI::Range(2, 1000000))
        ->capture_default_str();
    evolve_cmd->add_flag("--with-nu", ea.with_nu, "also evaluate nu(t) at every sample");
    add_output_opts(evolve_cmd, ea.out);
    evolve_cmd->callback([&] { run_evolve(ea); });

    TimesArgs ta;
    auto* times_cmd = app.add_subcommand(
        "times", "characteristic times (t_dec, t_diss, t_ncl, r) for a list of (N, nbar)");
    times_cmd->add_option("--atoms", ta.atoms, "atom counts (repeatable)");
    times_cmd->add_option("--atoms-log", ta.atoms_log, "log-spaced atom grid: lo hi count")
        ->expected(3);
    times_cmd->add_option("--nbar", ta.nbars, "bath photon numbers (repeatable)")->required();
    add_output_opts(times_cmd, ta.out);
    times_cmd->callback([&] { run_times(ta); });

    TimesArgs swa;
    auto* sweep_cmd = app.add_subcommand(
        "sweep", "same table as 'times', computed in parallel (SPINCAT_THREADS caps workers)");
    sweep_cmd->add_option("--atoms", swa.atoms, "atom counts (repeatable)");
    sweep_cmd->add_option("--atoms-log", swa.atoms_log, "log-spaced atom grid: lo hi count")
        ->expected(3);
    sweep_cmd->add_option("--nbar", swa.nbars, "bath photon numbers (repeatable)")->required();
    add_output_opts(sweep_cmd, swa.out);
    sweep_cmd->callback([&] { run_sweep(swa); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help and friends
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const StiffnessError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const HorizonError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const ResolutionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
