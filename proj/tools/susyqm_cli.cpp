// susyqm: command-line driver for the spectrum, factorization and algebra checks.
//
// Exit status: 0 success, 1 invalid input or solver failure (a JSON error
// object is printed), 2 a verification command found a failing relation.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "susyqm/fock.hpp"
#include "susyqm/graded.hpp"
#include "susyqm/schrodinger.hpp"
#include "susyqm/spin.hpp"
#include "susyqm/susy.hpp"

using json = nlohmann::ordered_json;
using namespace susyqm;

namespace {

constexpr const char* kVersion = "1.0.0";

// nlohmann prints the shortest round-trip form; the output contract here is
// a fixed 17 significant digits, so numbers are written by hand.
void write_json(std::ostream& os, const json& j, int indent, int depth = 0) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) os << ",\n";
                first = false;
                os << pad << json(key).dump() << ": ";
                write_json(os, value, indent, depth + 1);
            }
            os << '\n' << close_pad << '}';
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            // Arrays of scalars stay on one line.
            const bool flat = std::none_of(j.begin(), j.end(), [](const json& e) { return e.is_structured(); });
            os << '[';
            bool first = true;
            for (const auto& e : j) {
                if (!first) os << (flat ? ", " : ",");
                first = false;
                if (!flat) os << '\n' << pad;
                write_json(os, e, indent, depth + 1);
            }
            if (!flat) os << '\n' << close_pad;
            os << ']';
            return;
        }
        case json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) {
                os << "null";
                return;
            }
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            os << buf;
            return;
        }
        default:
            os << j.dump();
    }
}

std::string to_text(const json& j) {
    std::ostringstream os;
    write_json(os, j, 2);
    os << '\n';
    return os.str();
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Options {
    std::string potential = "well";
    std::string base = "well";
    int level = 1;
    double length = std::numbers::pi;
    std::optional<double> a;
    std::optional<double> b;
    std::size_t n = 2000;
    double omega = 1.0;
    double center = 0.0;
    std::string file;

    std::size_t levels = 5;
    double tol = 1e-10;
    double tol_rel = 1e-2;
    double min_overlap = 0.999;
    double kernel_tol = 1e-3;
    std::size_t depth = 2;
    std::optional<double> ceiling;
    double algebra_tol = 1e-12;

    int bosons = 1;
    int cutoff = 4;
    int fermions = 1;

    double a0 = 0.0;
    double ax = 0.0;
    double ay = 0.0;
    double az = 1.0;
    double up_re = 1.0;
    double up_im = 0.0;
    double down_re = 0.0;
    double down_im = 0.0;
    bool normalize = false;

    std::string format = "json";
    std::string output;
    unsigned threads = 1;
};

unsigned threads_from_env() {
    const char* s = std::getenv("SUSY_SPECTRA_THREADS");
    if (s == nullptr || *s == '\0') return 1;
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (*end != '\0' || v < 1 || v > 256) throw InputError("SUSY_SPECTRA_THREADS must be an integer in 1..256");
    return static_cast<unsigned>(v);
}

// ---- grid and potential from the options ----

struct Setup {
    Grid1D grid;
    PotentialSpec potential;
    json description;
};

PotentialSpec base_potential(const std::string& kind, const Options& o, json& desc) {
    if (kind == "well") {
        desc = {{"kind", "infinite_well"}, {"L", o.length}};
        return InfiniteWell{};
    }
    if (kind == "harmonic") {
        desc = {{"kind", "harmonic"}, {"omega", o.omega}, {"center", o.center}};
        return Harmonic{o.omega, o.center};
    }
    if (kind == "file") {
        if (o.file.empty()) throw InputError("--potential file needs --file");
        desc = {{"kind", "tabulated"}, {"file", o.file}};
        return load_potential_csv(o.file);
    }
    throw InputError("unknown potential: " + kind);
}

Grid1D make_grid(const std::string& kind, const PotentialSpec& v, const Options& o) {
    double a = 0.0;
    double b = o.length;
    if (kind == "harmonic") {
        a = o.center - 10.0;
        b = o.center + 10.0;
    } else if (const auto* t = std::get_if<Tabulated>(&v)) {
        a = t->xs.front();
        b = t->xs.back();
    }
    if (o.a) a = *o.a;
    if (o.b) b = *o.b;
    return {a, b, o.n};
}

Setup make_setup(const Options& o) {
    if (!(o.length > 0.0)) throw DomainError("--L must be positive");
    const std::string kind = o.potential == "partner" ? o.base : o.potential;
    if (o.potential == "partner" && kind == "partner") throw InputError("--base cannot be partner");
    json desc;
    PotentialSpec v = base_potential(kind, o, desc);
    Setup s{make_grid(kind, v, o), v, desc};
    if (o.potential == "partner") {
        if (o.level < 1) throw DomainError("--level must be >= 1");
        FactorOptions fo;
        fo.tol = o.tol;
        fo.threads = o.threads;
        for (int m = 0; m < o.level; ++m) s.potential = GridSamples{factorize(s.grid, s.potential, 1, fo).v1};
        s.description = {{"kind", "partner"}, {"level", o.level}, {"base", desc}};
    }
    return s;
}

json config_header(const std::string& command, const Options& o, const Setup* s) {
    json c;
    c["tool"] = "susyqm";
    c["version"] = kVersion;
    c["command"] = command;
    if (s != nullptr) {
        c["grid"] = {{"a", s->grid.a}, {"b", s->grid.b}, {"n", s->grid.n}};
        c["potential"] = s->description;
        c["levels"] = o.levels;
        c["tol"] = o.tol;
    }
    if (command == "partner" || command == "hierarchy") {
        c["tol_rel"] = o.tol_rel;
        c["min_overlap"] = o.min_overlap;
        c["kernel_tol"] = o.kernel_tol;
        c["depth"] = o.depth;
        c["ceiling"] = o.ceiling ? json(*o.ceiling) : json(nullptr);
    }
    if (command == "superpotential") c["kernel_tol"] = o.kernel_tol;
    if (command == "algebra-check") c["algebra_tol"] = o.algebra_tol;
    if (command == "fock-check") c["fock"] = {{"bosons", o.bosons}, {"cutoff", o.cutoff}, {"fermions", o.fermions}};
    if (command == "spin") {
        c["observable"] = {{"a0", o.a0}, {"a", {o.ax, o.ay, o.az}}};
        c["state"] = {{"up", {o.up_re, o.up_im}}, {"down", {o.down_re, o.down_im}}};
        c["normalize"] = o.normalize;
    }
    c["format"] = o.format;
    c["threads"] = o.threads;
    return c;
}

json to_json(const std::vector<double>& v) { return json(v); }

json reports_json(const std::vector<AlgebraReport>& reports) {
    json rows = json::array();
    for (const auto& r : reports) rows.push_back({{"relation", r.relation_name}, {"residual", r.max_residual}, {"pass", r.passed}});
    return rows;
}

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& columns) {
    std::ostringstream os;
    for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
    os << '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << fmt17(columns[c][r]);
        os << '\n';
    }
    return os.str();
}

struct Result {
    std::string text;
    int status = 0;
};

EigenOptions eigen_options(const Options& o) {
    EigenOptions eo;
    eo.tol = o.tol;
    eo.threads = o.threads;
    return eo;
}

FactorOptions factor_options(const Options& o) {
    FactorOptions fo;
    fo.tol = o.tol;
    fo.threads = o.threads;
    return fo;
}

std::vector<HierarchyLevel> run_hierarchy(const Setup& s, const Options& o) {
    HierarchyOptions ho;
    ho.max_depth = o.depth;
    ho.levels = std::max(o.levels, o.depth + 1);
    ho.ceiling = o.ceiling.value_or(std::numeric_limits<double>::infinity());
    ho.factor = factor_options(o);
    return hierarchy(s.grid, s.potential, ho);
}

json hierarchy_json(const std::vector<HierarchyLevel>& levels) {
    json rows = json::array();
    for (const auto& l : levels) {
        rows.push_back({{"depth", l.depth}, {"ground_energy", l.ground_energy}, {"cumulative_shift", l.cumulative_shift}});
    }
    return rows;
}

// ---- commands ----

Result cmd_spectrum(const Options& o) {
    const Setup s = make_setup(o);
    const auto hm = build_hamiltonian(s.grid, s.potential);
    const auto sp = solve_lowest(s.grid, hm, o.levels, eigen_options(o));
    if (o.format == "csv") {
        std::vector<std::string> header{"x"};
        std::vector<std::vector<double>> cols{s.grid.points()};
        for (std::size_t m = 0; m < sp.size(); ++m) {
            header.push_back("phi_" + std::to_string(m));
            cols.push_back(sp.eigenvectors[m]);
        }
        return {csv_table(header, cols)};
    }
    json j;
    j["config"] = config_header("spectrum", o, &s);
    j["grid"] = {{"a", s.grid.a}, {"b", s.grid.b}, {"n", s.grid.n}};
    j["potential"] = s.description;
    j["eigenvalues"] = to_json(sp.eigenvalues);
    j["residuals"] = to_json(sp.residuals);
    return {to_text(j)};
}

Result cmd_partner(const Options& o) {
    const Setup s = make_setup(o);
    const auto pair = factorize(s.grid, s.potential, o.levels, factor_options(o));
    if (o.format == "csv") {
        return {csv_table({"x", "V", "Vtilde", "W", "phi0"},
                          {s.grid.points(), pair.v0_shifted, pair.v1, pair.w, pair.spectrum0.eigenvectors.front()})};
    }
    DegeneracyOptions dopt{o.tol_rel, o.min_overlap, o.kernel_tol};
    const auto rep = degeneracy_check(pair, o.levels, dopt);
    const auto levels = run_hierarchy(s, o);

    json j;
    j["config"] = config_header("partner", o, &s);
    j["lambda0"] = pair.lambda0;
    j["spectrum0"] = to_json(pair.spectrum0.eigenvalues);
    j["spectrum1"] = to_json(pair.spectrum1.eigenvalues);
    json deg = json::array();
    for (const auto& e : rep.levels) {
        deg.push_back({{"m", e.m}, {"lam0", e.lam0}, {"lam1", e.lam1}, {"rel_err", e.rel_err}, {"pass", e.pass}});
    }
    j["degeneracy"] = deg;
    json tw = json::array();
    for (const auto& e : rep.intertwining) {
        tw.push_back({{"m", e.m}, {"forward", e.forward}, {"backward", e.backward}, {"pass", e.pass}});
    }
    j["intertwining"] = tw;
    j["kernel"] = {{"norm", rep.kernel_norm}, {"pass", rep.kernel_pass}};
    j["W"] = {{"x", s.grid.points()}, {"w", pair.w}};
    j["hierarchy"] = hierarchy_json(levels);
    j["all_pass"] = rep.all_passed();
    return {to_text(j), rep.all_passed() ? 0 : 2};
}

Result cmd_hierarchy(const Options& o) {
    const Setup s = make_setup(o);
    const auto levels = run_hierarchy(s, o);
    if (o.format == "csv") {
        std::vector<double> d, g, c;
        for (const auto& l : levels) {
            d.push_back(static_cast<double>(l.depth));
            g.push_back(l.ground_energy);
            c.push_back(l.cumulative_shift);
        }
        return {csv_table({"depth", "ground_energy", "cumulative_shift"}, {d, g, c})};
    }
    json rows = json::array();
    for (const auto& l : levels) {
        std::vector<double> e = l.pair.spectrum0.eigenvalues;
        for (double& v : e) v += l.cumulative_shift;
        rows.push_back({{"depth", l.depth},
                        {"ground_energy", l.ground_energy},
                        {"cumulative_shift", l.cumulative_shift},
                        {"eigenvalues", e}});
    }
    json j;
    j["config"] = config_header("hierarchy", o, &s);
    j["hierarchy"] = rows;
    return {to_text(j)};
}

Result cmd_superpotential(const Options& o) {
    const Setup s = make_setup(o);
    const auto pair = factorize(s.grid, s.potential, 1, factor_options(o));
    if (o.format == "csv") return {csv_table({"x", "W"}, {s.grid.points(), pair.w})};
    const double kernel = grid_norm(s.grid, apply_a(s.grid, pair.w, pair.spectrum0.eigenvectors.front())) /
                          grid_norm(s.grid, pair.spectrum0.eigenvectors.front());
    json j;
    j["config"] = config_header("superpotential", o, &s);
    j["lambda0"] = pair.lambda0;
    j["x"] = s.grid.points();
    j["W"] = pair.w;
    j["V"] = pair.v0_shifted;
    j["Vtilde"] = pair.v1;
    j["kernel"] = {{"norm", kernel}, {"pass", kernel < o.kernel_tol}};
    return {to_text(j), kernel < o.kernel_tol ? 0 : 2};
}

Result cmd_algebra_check(const Options& o) {
    const Setup s = make_setup(o);
    const auto pair = factorize(s.grid, s.potential, 1, factor_options(o));
    const auto blocks = block_assemble(pair);
    // Residuals are compared against algebra_tol * max|H|.
    const double scale = std::max(1.0, detail::max_abs(blocks.h.entries()));
    auto reports = verify_super_heisenberg(blocks.h, blocks.q, blocks.q_dag, o.algebra_tol * scale);
    if (o.format == "csv") {
        std::ostringstream os;
        os << "relation,residual,pass\n";
        for (const auto& r : reports) os << '"' << r.relation_name << "\"," << fmt17(r.max_residual) << ',' << (r.passed ? 1 : 0) << '\n';
        return {os.str(), all_passed(reports) ? 0 : 2};
    }
    json j;
    j["config"] = config_header("algebra-check", o, &s);
    j["scale"] = scale;
    j["relations"] = reports_json(reports);
    j["all_pass"] = all_passed(reports);
    return {to_text(j), all_passed(reports) ? 0 : 2};
}

Result cmd_fock_check(const Options& o) {
    const fock::FockSpec spec{o.bosons, o.cutoff, o.fermions};
    spec.validate();
    if (spec.dimension() > (std::size_t{1} << 16)) throw DomainError("fock-check: Hilbert space larger than 2^16");
    std::vector<AlgebraReport> reports;
    if (o.fermions > 0) {
        const auto f = fock::check_fermion_algebra<Surd>(spec);
        reports.insert(reports.end(), f.begin(), f.end());
    }
    if (o.bosons > 0) {
        const auto b = fock::check_boson_algebra<Surd>(spec);
        reports.insert(reports.end(), b.begin(), b.end());
    }
    if (o.bosons > 0 && o.fermions > 0) {
        const auto q = fock::check_supercharge_algebra<Surd>(spec);
        reports.insert(reports.end(), q.begin(), q.end());
    }
    const bool ok = all_passed(reports);
    if (o.format == "csv") {
        std::ostringstream os;
        os << "relation,residual,pass\n";
        for (const auto& r : reports) os << '"' << r.relation_name << "\"," << fmt17(r.max_residual) << ',' << (r.passed ? 1 : 0) << '\n';
        return {os.str(), ok ? 0 : 2};
    }
    json j;
    j["config"] = config_header("fock-check", o, nullptr);
    j["dimension"] = spec.dimension();
    j["relations"] = reports_json(reports);
    j["all_pass"] = ok;
    return {to_text(j), ok ? 0 : 2};
}

json state_json(const spin::SpinState& s) {
    return {{"up", {s.up.real(), s.up.imag()}}, {"down", {s.down.real(), s.down.imag()}}};
}

Result cmd_spin(const Options& o) {
    const spin::SpinObservable obs{o.a0, {o.ax, o.ay, o.az}};
    spin::SpinState st{{o.up_re, o.up_im}, {o.down_re, o.down_im}};
    if (o.normalize) st = st.normalized();
    const auto [lm, lp] = spin::eigenvalues(obs);
    const auto res = spin::measure(st, obs);
    if (o.format == "csv") {
        std::ostringstream os;
        os << "eigenvalue,probability\n";
        for (const auto& out : res.outcomes) os << fmt17(out.eigenvalue) << ',' << fmt17(out.probability) << '\n';
        return {os.str()};
    }
    json outcomes = json::array();
    for (const auto& out : res.outcomes) {
        outcomes.push_back({{"eigenvalue", out.eigenvalue}, {"probability", out.probability}, {"collapsed", state_json(out.collapsed)}});
    }
    json j;
    j["config"] = config_header("spin", o, nullptr);
    j["eigenvalues"] = {lm, lp};
    j["outcomes"] = outcomes;
    j["mean"] = res.mean();
    j["expectation"] = spin::expectation(st, obs);
    return {to_text(j)};
}

void print_error(const std::string& type, const std::string& message) {
    json j;
    j["error"] = {{"type", type}, {"message", message}};
    std::cout << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Supersymmetric quantum mechanics toolkit: spectra, Witten partners, hierarchy and algebra checks"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Options o;

    const auto add_output = [&](CLI::App* c) {
        c->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
        c->add_option("-o,--output", o.output, "Write to this file instead of stdout");
    };
    const auto add_grid = [&](CLI::App* c) {
        c->add_option("--potential", o.potential, "well | harmonic | file | partner")
            ->check(CLI::IsMember({"well", "harmonic", "file", "partner"}));
        c->add_option("--base", o.base, "Potential whose partner is taken with --potential partner")
            ->check(CLI::IsMember({"well", "harmonic", "file"}));
        c->add_option("--level", o.level, "Partner depth for --potential partner");
        c->add_option("--L", o.length, "Well width; the grid is [0, L] unless --a/--b are given");
        c->add_option("--a", o.a, "Left end of the grid");
        c->add_option("--b", o.b, "Right end of the grid");
        c->add_option("--n", o.n, "Interior grid points")->check(CLI::Range(std::size_t{3}, std::size_t{50'000'000}));
        c->add_option("--omega", o.omega, "Oscillator frequency");
        c->add_option("--center", o.center, "Oscillator center");
        c->add_option("--file", o.file, "CSV file with x,V rows");
        c->add_option("--levels", o.levels, "Number of levels")->check(CLI::PositiveNumber);
        c->add_option("--tol", o.tol, "Eigensolver residual tolerance relative to ||H||")->check(CLI::PositiveNumber);
        add_output(c);
    };
    const auto add_partner = [&](CLI::App* c) {
        c->add_option("--tol-rel", o.tol_rel, "Relative tolerance for partner degeneracy")->check(CLI::PositiveNumber);
        c->add_option("--min-overlap", o.min_overlap, "Minimum intertwining overlap")->check(CLI::Range(0.0, 1.0));
        c->add_option("--kernel-tol", o.kernel_tol, "Bound on ||A phi0|| / ||phi0||")->check(CLI::PositiveNumber);
        c->add_option("--depth", o.depth, "Hierarchy depth")->check(CLI::PositiveNumber);
        c->add_option("--ceiling", o.ceiling, "Energy ceiling for counting bound levels");
    };

    auto* spectrum = app.add_subcommand("spectrum", "Lowest eigenvalues and eigenvectors");
    add_grid(spectrum);
    auto* partner = app.add_subcommand("partner", "Factorize, compare partner spectra, report W and the hierarchy");
    add_grid(partner);
    add_partner(partner);
    auto* hier = app.add_subcommand("hierarchy", "Iterate the factorization");
    add_grid(hier);
    add_partner(hier);
    auto* superpot = app.add_subcommand("superpotential", "Superpotential and partner potential samples");
    add_grid(superpot);
    superpot->add_option("--kernel-tol", o.kernel_tol, "Bound on ||A phi0|| / ||phi0||")->check(CLI::PositiveNumber);
    auto* algebra = app.add_subcommand("algebra-check", "Graded block form of the factorized Hamiltonian");
    add_grid(algebra);
    algebra->add_option("--algebra-tol", o.algebra_tol, "Residual bound relative to max|H|")->check(CLI::PositiveNumber);
    auto* fockc = app.add_subcommand("fock-check", "Exact ladder-operator and supercharge relations");
    fockc->add_option("--bosons", o.bosons, "Boson modes")->check(CLI::NonNegativeNumber);
    fockc->add_option("--cutoff", o.cutoff, "Boson occupation cutoff M")->check(CLI::PositiveNumber);
    fockc->add_option("--fermions", o.fermions, "Fermion modes")->check(CLI::NonNegativeNumber);
    add_output(fockc);
    auto* spinc = app.add_subcommand("spin", "Eigenvalues and outcome probabilities of a0 + a.sigma");
    spinc->add_option("--a0", o.a0);
    spinc->add_option("--ax", o.ax);
    spinc->add_option("--ay", o.ay);
    spinc->add_option("--az", o.az);
    spinc->add_option("--up-re", o.up_re);
    spinc->add_option("--up-im", o.up_im);
    spinc->add_option("--down-re", o.down_re);
    spinc->add_option("--down-im", o.down_im);
    spinc->add_flag("--normalize", o.normalize, "Normalize the state before measuring");
    add_output(spinc);

    if (argc > 1 && argv[1][0] != '-') {
        const std::string first = argv[1];
        const auto subs = app.get_subcommands([](const CLI::App*) { return true; });
        if (std::none_of(subs.begin(), subs.end(), [&](const CLI::App* s) { return s->get_name() == first; })) {
            print_error("usage", "unknown command: " + first);
            return 1;
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("usage", e.what());
        return 1;
    }

    try {
        o.threads = threads_from_env();
        const std::string name = app.get_subcommands().front()->get_name();
        Result r;
        if (name == "spectrum") r = cmd_spectrum(o);
        else if (name == "partner") r = cmd_partner(o);
        else if (name == "hierarchy") r = cmd_hierarchy(o);
        else if (name == "superpotential") r = cmd_superpotential(o);
        else if (name == "algebra-check") r = cmd_algebra_check(o);
        else if (name == "fock-check") r = cmd_fock_check(o);
        else r = cmd_spin(o);

        if (o.output.empty()) {
            std::cout << r.text;
        } else {
            std::ofstream out(o.output, std::ios::binary);
            if (!out) throw InputError("cannot write " + o.output);
            out << r.text;
        }
        return r.status;
    } catch (const Error& e) {
        print_error(e.kind(), e.what());
    } catch (const std::exception& e) {
        print_error("internal", e.what());
    }
    return 1;
}
