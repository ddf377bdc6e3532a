#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "idsum/analysis.hpp"
#include "idsum/detsum.hpp"
#include "idsum/qoalgebra.hpp"
#include "idsum/units.hpp"
#include "idsum/zeta.hpp"

using namespace idsum;
using json = nlohmann::json;

namespace {

// one flat record covering every subcommand; what --dump-config emits and
// --config reads back, so a run is reproducible from its serialized form
struct RunConfig {
    std::string command;
    std::string field;
    std::string algebra;
    double s = 1.0;
    int64_t limit = 0;
    std::vector<int64_t> checkpoints;
    double radius = 0.0;
    std::vector<double> radii;
    std::vector<double> log_radii;
    double m = 2.0;
    int n_r = 0;
    bool normalized = false;
    bool legacy_scale = false;
    int union_nr = 0;
    std::string format = "table";
    std::string out;
    double budget = 0.0;  // 0 = IDSUM_BUDGET env or the library default
    int threads = 0;      // 0 = leave the OpenMP runtime alone
    double slack = 2.0;
    double zeta_limit = 1e5;
};

void to_json(json& j, const RunConfig& c) {
    j = json{{"command", c.command},     {"field", c.field},
             {"algebra", c.algebra},     {"s", c.s},
             {"limit", c.limit},         {"checkpoints", c.checkpoints},
             {"radius", c.radius},       {"radii", c.radii},
             {"log_radii", c.log_radii}, {"m", c.m},
             {"n_r", c.n_r},             {"normalized", c.normalized},
             {"legacy_scale", c.legacy_scale}, {"union_nr", c.union_nr},
             {"format", c.format},       {"out", c.out},
             {"budget", c.budget},       {"threads", c.threads},
             {"slack", c.slack},         {"zeta_limit", c.zeta_limit}};
}

void from_json(const json& j, RunConfig& c) {
    RunConfig d;
    c.command = j.value("command", d.command);
    c.field = j.value("field", d.field);
    c.algebra = j.value("algebra", d.algebra);
    c.s = j.value("s", d.s);
    c.limit = j.value("limit", d.limit);
    c.checkpoints = j.value("checkpoints", d.checkpoints);
    c.radius = j.value("radius", d.radius);
    c.radii = j.value("radii", d.radii);
    c.log_radii = j.value("log_radii", d.log_radii);
    c.m = j.value("m", d.m);
    c.n_r = j.value("n_r", d.n_r);
    c.normalized = j.value("normalized", d.normalized);
    c.legacy_scale = j.value("legacy_scale", d.legacy_scale);
    c.union_nr = j.value("union_nr", d.union_nr);
    c.format = j.value("format", d.format);
    c.out = j.value("out", d.out);
    c.budget = j.value("budget", d.budget);
    c.threads = j.value("threads", d.threads);
    c.slack = j.value("slack", d.slack);
    c.zeta_limit = j.value("zeta_limit", d.zeta_limit);
}

EnumOptions enum_options(const RunConfig& cfg) {
    EnumOptions opt;
    if (cfg.budget > 0) {
        opt.budget = cfg.budget;
    } else if (const char* env = std::getenv("IDSUM_BUDGET")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && v > 0) opt.budget = v;
    }
    return opt;
}

// radii come either raw (--radii) or as exponents t with M = e^t (--log-radii)
std::vector<double> resolve_radii(const RunConfig& cfg) {
    std::vector<double> out = cfg.radii;
    for (double t : cfg.log_radii) out.push_back(std::exp(t));
    if (cfg.radius > 0) out.push_back(cfg.radius);
    return out;
}

std::string verdict_name(BoundVerdict v) {
    switch (v) {
        case BoundVerdict::pass: return "pass";
        case BoundVerdict::fail: return "fail";
        default: return "skipped";
    }
}

// single writer for all primary output; --out redirects it to a file
struct Sink {
    std::ofstream file;
    bool to_file = false;

    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file.open(path);
            if (!file) throw ScopeError("cannot open output path " + path);
            to_file = true;
        }
    }
    std::ostream& os() { return to_file ? static_cast<std::ostream&>(file) : std::cout; }
};

int cmd_field_info(const RunConfig& cfg, Sink& sink) {
    auto K = catalog_lookup(cfg.field);
    auto rc = residue_constant(K);
    const double nk = unit_density_constant(K, K->matrix_size());
    auto& os = sink.os();
    if (cfg.format == "csv") {
        os << "key,value\n";
        os << "name," << K->name << "\n";
        os << "degree," << K->degree << "\n";
        os << "r1," << K->r1 << "\n";
        os << "r2," << K->r2 << "\n";
        os << "discriminant," << K->discriminant << "\n";
        os << "class_number," << K->class_number << "\n";
        os << "regulator," << fmt_shortest(K->regulator) << "\n";
        os << "roots_of_unity," << K->roots_of_unity << "\n";
        os << "residue_alpha_h," << fmt_shortest(rc.alpha_h) << "\n";
        os << "unit_density," << fmt_shortest(nk) << "\n";
    } else if (cfg.format == "json") {
        json j{{"name", K->name},
               {"degree", K->degree},
               {"signature", {K->r1, K->r2}},
               {"discriminant", K->discriminant},
               {"class_number", K->class_number},
               {"regulator", K->regulator},
               {"roots_of_unity", K->roots_of_unity},
               {"residue_alpha", rc.alpha},
               {"residue_alpha_h", rc.alpha_h},
               {"unit_density", nk},
               {"unit_caveat", K->unit_caveat}};
        os << j.dump(2) << "\n";
    } else {
        os << "field " << K->name << "\n";
        os << "  degree          " << K->degree << "  signature (" << K->r1 << ", " << K->r2
           << ")\n";
        os << "  discriminant    " << K->discriminant << "\n";
        os << "  class number    " << K->class_number << "\n";
        os << "  regulator       " << fmt_fixed4(K->regulator) << "\n";
        os << "  roots of unity  " << K->roots_of_unity << "\n";
        os << "  residue const   alpha h = " << fmt_fixed4(rc.alpha_h) << "\n";
        os << "  unit density    " << fmt_fixed4(nk) << "  (matrix size " << K->matrix_size()
           << ")\n";
        os << "  catalog         " << catalog_data_path() << "\n";
        if (!K->unit_caveat.empty()) os << "  caveat: " << K->unit_caveat << "\n";
    }
    return 0;
}

int cmd_lattice_vol(const RunConfig& cfg, Sink& sink) {
    MatrixLattice L = cfg.algebra.empty() ? canonical_embedding_lattice(catalog_lookup(cfg.field))
                                          : order_lattice(algebra_lookup(cfg.algebra));
    auto nf = normalization_factor(L, cfg.m);
    auto& os = sink.os();
    if (cfg.format == "csv") {
        os << "label,rank,matrix_size,volume,scale,radius_factor\n";
        os << L.label << "," << L.rank << "," << L.matrix_size << "," << fmt_shortest(L.volume)
           << "," << fmt_shortest(nf.scale) << "," << fmt_shortest(nf.radius_factor) << "\n";
    } else if (cfg.format == "json") {
        json j{{"label", L.label},          {"rank", L.rank},
               {"matrix_size", L.matrix_size}, {"volume", L.volume},
               {"scale", nf.scale},         {"radius_factor", nf.radius_factor}};
        os << j.dump(2) << "\n";
    } else {
        os << "lattice " << L.label << "\n";
        os << "  rank          " << L.rank << "\n";
        os << "  matrix size   " << L.matrix_size << "\n";
        os << "  covolume      " << fmt_fixed4(L.volume) << "\n";
        os << "  normalization at m = " << fmt_shortest(cfg.m) << ": scale "
           << fmt_fixed4(nf.scale) << ", radius factor " << fmt_fixed4(nf.radius_factor) << "\n";
    }
    return 0;
}

int cmd_zeta(const RunConfig& cfg, Sink& sink) {
    if (cfg.limit < 1) throw ScopeError("zeta needs --limit >= 1");
    auto K = catalog_lookup(cfg.field);
    auto table = ideal_counts(K, cfg.limit);
    auto zv = truncated_zeta(table, cfg.s);
    auto& os = sink.os();

    // rows at the checkpoints, or at every n when none were given
    std::vector<int64_t> rows = cfg.checkpoints;
    if (rows.empty())
        for (int64_t n = 1; n <= cfg.limit; ++n) rows.push_back(n);

    const bool csv = cfg.format == "csv";
    if (!csv && cfg.format != "json") {
        os << "zeta_" << K->name << "(" << fmt_shortest(cfg.s) << ", " << cfg.limit
           << ") = " << fmt_fixed4(zv.value);
        if (std::isinf(zv.tail_bound))
            os << "  (tail unbounded at s = 1)\n";
        else
            os << "  (tail bound " << fmt_fixed4(zv.tail_bound) << ")\n";
    }

    if (cfg.format == "json") {
        json j{{"field", K->name}, {"s", cfg.s}, {"limit", cfg.limit},
               {"value", zv.value}, {"tail_bound", zv.tail_bound}};
        os << j.dump(2) << "\n";
        return 0;
    }

    os << "n,z,cumulative,zeta\n";
    Neumaier partial;
    int64_t cumulative = 0;
    size_t next = 0;
    for (int64_t n = 1; n <= cfg.limit && next < rows.size(); ++n) {
        cumulative += table.at(n);
        partial.add(double(table.at(n)) / std::pow(double(n), cfg.s));
        if (n == rows[next]) {
            os << n << "," << table.at(n) << "," << cumulative << ","
               << (csv ? fmt_shortest(partial.value()) : fmt_fixed4(partial.value())) << "\n";
            ++next;
        }
    }
    return 0;
}

int cmd_ideals(const RunConfig& cfg, Sink& sink) {
    if (cfg.limit < 1) throw ScopeError("ideals needs --limit >= 1");
    auto K = catalog_lookup(cfg.field);
    auto table = ideal_counts(K, cfg.limit);
    std::vector<int64_t> rows = cfg.checkpoints.empty() ? std::vector<int64_t>{cfg.limit}
                                                        : cfg.checkpoints;
    auto& os = sink.os();
    const bool csv = cfg.format == "csv";
    json jrows = json::array();
    if (csv) os << "M,count,main_term,abs_error,relative_error\n";
    for (int64_t M : rows) {
        if (M < 1 || M > cfg.limit) throw ScopeError("checkpoint out of range: " + std::to_string(M));
        IdealCountTable sub;
        sub.field = table.field;
        sub.limit = M;
        sub.z.assign(table.z.begin(), table.z.begin() + M + 1);
        auto cum = ideal_count_cumulative(sub);
        if (csv) {
            os << M << "," << cum.count << "," << fmt_shortest(cum.main_term) << ","
               << fmt_shortest(cum.abs_error) << "," << fmt_shortest(cum.relative_error) << "\n";
        } else if (cfg.format == "json") {
            jrows.push_back({{"M", M},
                             {"count", cum.count},
                             {"main_term", cum.main_term},
                             {"relative_error", cum.relative_error}});
        } else {
            os << "M = " << M << ": " << cum.count << " ideals, main term "
               << fmt_fixed4(cum.main_term) << ", relative error "
               << fmt_fixed4(cum.relative_error) << "\n";
        }
    }
    if (cfg.format == "json") os << jrows.dump(2) << "\n";
    return 0;
}

int cmd_units(const RunConfig& cfg, Sink& sink) {
    auto K = catalog_lookup(cfg.field);
    auto radii = resolve_radii(cfg);
    if (radii.empty()) throw ScopeError("units needs --radius or --radii");
    auto& os = sink.os();
    const bool csv = cfg.format == "csv";
    json jrows = json::array();
    if (csv) os << "M,count,predicted,residual\n";
    std::string caveat;
    for (double M : radii) {
        auto ub = unit_ball_count(K, M);
        caveat = ub.caveat;
        const double residual = double(ub.count) - ub.predicted;
        if (csv) {
            os << fmt_shortest(M) << "," << ub.count << "," << fmt_shortest(ub.predicted) << ","
               << fmt_shortest(residual) << "\n";
        } else if (cfg.format == "json") {
            jrows.push_back({{"M", M}, {"count", ub.count}, {"predicted", ub.predicted},
                             {"residual", residual}});
        } else {
            os << "M = " << fmt_shortest(M) << ": count " << ub.count << ", predicted "
               << fmt_fixed4(ub.predicted) << ", residual " << fmt_fixed4(residual) << "\n";
        }
    }
    if (cfg.format == "json") os << jrows.dump(2) << "\n";
    if (!csv && cfg.format != "json" && !caveat.empty()) os << "caveat: " << caveat << "\n";
    return 0;
}

int run_detsum(const RunConfig& cfg, const MatrixLattice& L, Sink& sink) {
    auto radii = resolve_radii(cfg);
    if (radii.empty()) throw ScopeError("detsum needs --radius or --radii");
    auto opt = enum_options(cfg);
    auto& os = sink.os();
    const bool csv = cfg.format == "csv";
    json jrows = json::array();
    if (csv) os << "M,m,value,point_count,min_abs_det\n";
    for (double M : radii) {
        DetSumResult r = cfg.normalized
                             ? normalized_inverse_det_sum(L, M, cfg.m, cfg.legacy_scale, opt)
                             : inverse_det_sum(L, M, cfg.m, opt);
        if (csv) {
            os << fmt_shortest(M) << "," << fmt_shortest(cfg.m) << "," << fmt_shortest(r.value)
               << "," << r.point_count << "," << fmt_shortest(r.min_abs_det) << "\n";
        } else if (cfg.format == "json") {
            jrows.push_back({{"M", M}, {"m", cfg.m}, {"value", r.value},
                             {"point_count", r.point_count}, {"min_abs_det", r.min_abs_det}});
        } else {
            os << (cfg.normalized ? "normalized " : "") << "S^" << fmt_shortest(cfg.m) << "("
               << L.label << ") at M = " << fmt_shortest(M) << ": " << fmt_fixed4(r.value) << "  ("
               << r.point_count << " points, min |det| " << fmt_fixed4(r.min_abs_det) << ")\n";
        }
    }
    if (cfg.format == "json") os << jrows.dump(2) << "\n";
    if (cfg.union_nr > 0) {
        const double ub = union_bound(L, radii.back(), cfg.union_nr, opt);
        if (csv || cfg.format == "json")
            os << "union_bound," << fmt_shortest(ub) << "\n";
        else
            os << "union bound at n_r = " << cfg.union_nr << ", M = "
               << fmt_shortest(radii.back()) << ": " << fmt_fixed4(ub) << "\n";
    }
    return 0;
}

int cmd_qo_check(const RunConfig& cfg, Sink& sink) {
    auto A = algebra_lookup(cfg.algebra);  // the full consistency suite runs at load
    auto L = order_lattice(A);
    const auto& cert = A->division_certificate;
    auto& os = sink.os();
    if (cfg.format == "json") {
        json j{{"name", A->name},
               {"k", A->k()},
               {"matrix_size", A->matrix_size()},
               {"gamma_at", A->gamma_at},
               {"lattice_rank", L.rank},
               {"lattice_volume", L.volume},
               {"certificate",
                {{"probe_radius", cert.probe_radius},
                 {"points_checked", cert.points_checked},
                 {"min_abs_det", cert.min_abs_det}}}};
        os << j.dump(2) << "\n";
        return 0;
    }
    os << "algebra " << A->name << ": consistency checks passed\n";
    os << "  center degree k  " << A->k() << "  matrix size " << A->matrix_size() << "\n";
    os << "  gamma at blocks ";
    for (double g : A->gamma_at) os << " " << fmt_fixed4(g);
    os << "\n";
    os << "  order lattice    rank " << L.rank << ", covolume " << fmt_fixed4(L.volume) << "\n";
    os << "  division probe   radius " << fmt_fixed4(cert.probe_radius) << ", "
       << cert.points_checked << " points, min |det| " << fmt_fixed4(cert.min_abs_det) << "\n";
    return 0;
}

int cmd_compare(const RunConfig& cfg, Sink& sink) {
    auto radii = resolve_radii(cfg);
    if (radii.empty()) throw ScopeError("compare needs --radii or --log-radii");
    auto opt = enum_options(cfg);
    auto qo_curve = sum_curve(order_lattice(algebra_lookup(cfg.algebra)), radii, cfg.m, true,
                              false, opt);
    auto nf_curve = sum_curve(canonical_embedding_lattice(catalog_lookup(cfg.field)), radii,
                              cfg.m, true, false, opt);
    auto cmp = compare_growth(qo_curve, nf_curve);
    auto& os = sink.os();
    if (cfg.format == "csv") {
        os << "M,qo_value,nf_value,ratio\n";
        for (size_t i = 0; i < radii.size(); ++i)
            os << fmt_shortest(radii[i]) << "," << fmt_shortest(qo_curve.samples[i].value) << ","
               << fmt_shortest(nf_curve.samples[i].value) << ","
               << fmt_shortest(cmp.ratio_trend[i]) << "\n";
        return 0;
    }
    if (cfg.format == "json") {
        json j{{"qo_exponent", cmp.qo_fit.exponent},
               {"nf_exponent", cmp.nf_fit.exponent},
               {"qo_prefactor", cmp.qo_fit.prefactor},
               {"nf_prefactor", cmp.nf_fit.prefactor},
               {"ratio_trend", cmp.ratio_trend},
               {"ratio_increasing", cmp.ratio_increasing}};
        os << j.dump(2) << "\n";
        return 0;
    }
    os << "fit " << qo_curve.label << ": exponent " << fmt_fixed4(cmp.qo_fit.exponent)
       << ", prefactor " << fmt_fixed4(cmp.qo_fit.prefactor) << "\n";
    os << "fit " << nf_curve.label << ": exponent " << fmt_fixed4(cmp.nf_fit.exponent)
       << ", prefactor " << fmt_fixed4(cmp.nf_fit.prefactor) << "\n";
    os << "M,qo,nf,ratio\n";
    for (size_t i = 0; i < radii.size(); ++i)
        os << fmt_fixed4(radii[i]) << "," << fmt_fixed4(qo_curve.samples[i].value) << ","
           << fmt_fixed4(nf_curve.samples[i].value) << "," << fmt_fixed4(cmp.ratio_trend[i])
           << "\n";
    os << "ratio strictly increasing: " << (cmp.ratio_increasing ? "yes" : "no") << "\n";
    return 0;
}

int cmd_report(const RunConfig& cfg, Sink& sink) {
    BoundOptions opt;
    opt.slack = cfg.slack;
    opt.zeta_limit = cfg.zeta_limit;
    opt.enum_opts = enum_options(cfg);
    auto radii = resolve_radii(cfg);

    BoundReport rep;
    std::string caveat;
    if (!cfg.algebra.empty()) {
        auto A = algebra_lookup(cfg.algebra);
        if (radii.empty()) radii = default_radius_grid(order_lattice(A).rank);
        rep = bound_report(A, cfg.n_r, radii, opt);
    } else {
        auto K = catalog_lookup(cfg.field);
        if (radii.empty()) radii = default_radius_grid(K->degree);
        const double m_or_nr = cfg.n_r > 0 ? double(cfg.n_r) : cfg.m;
        rep = bound_report(K, m_or_nr, radii, opt);
        caveat = K->unit_caveat;
    }

    auto& os = sink.os();
    if (cfg.format == "csv") {
        os << "M,measured,lower,upper,point_count,verdict,pre_asymptotic\n";
        for (const auto& r : rep.rows)
            os << fmt_shortest(r.radius) << "," << fmt_shortest(r.measured) << ","
               << fmt_shortest(r.lower) << "," << fmt_shortest(r.upper) << "," << r.point_count
               << "," << verdict_name(r.verdict) << "," << (r.pre_asymptotic ? 1 : 0) << "\n";
        return 0;
    }
    if (cfg.format == "json") {
        json jrows = json::array();
        for (const auto& r : rep.rows)
            jrows.push_back({{"M", r.radius}, {"measured", r.measured}, {"lower", r.lower},
                             {"upper", r.upper}, {"point_count", r.point_count},
                             {"verdict", verdict_name(r.verdict)},
                             {"pre_asymptotic", r.pre_asymptotic}});
        json j{{"label", rep.label},         {"bound_name", rep.bound_name},
               {"exponent_m", rep.exponent_m}, {"slack", rep.slack},
               {"lower_coef", rep.lower_coef}, {"lower_log_power", rep.lower_log_power},
               {"upper_coef", rep.upper_coef}, {"upper_log_power", rep.upper_log_power},
               {"upper_note", rep.upper_note}, {"rows", jrows}};
        os << j.dump(2) << "\n";
        return 0;
    }

    os << "bound report for " << rep.label << "  (" << rep.bound_name << ", m = "
       << fmt_shortest(rep.exponent_m) << ", slack " << fmt_shortest(rep.slack) << ")\n";
    os << "  lower main term  " << fmt_fixed4(rep.lower_coef) << " (log M)^"
       << fmt_shortest(rep.lower_log_power) << "\n";
    os << "  upper main term  " << fmt_fixed4(rep.upper_coef) << " (log M)^"
       << fmt_shortest(rep.upper_log_power) << "\n";
    os << "  upper term note  " << rep.upper_note << "\n";
    os << "M,measured,lower,upper,points,verdict,pre_asymptotic\n";
    for (const auto& r : rep.rows)
        os << fmt_fixed4(r.radius) << "," << fmt_fixed4(r.measured) << ","
           << fmt_fixed4(r.lower) << "," << fmt_fixed4(r.upper) << "," << r.point_count << ","
           << verdict_name(r.verdict) << "," << (r.pre_asymptotic ? 1 : 0) << "\n";

    // empirical prefactor next to the theoretical one, over the surviving rows
    double c_fit = 0;
    bool have = false;
    for (const auto& r : rep.rows) {
        if (r.verdict == BoundVerdict::skipped) continue;
        const double q = r.measured / std::pow(std::log(r.radius), rep.lower_log_power);
        if (!have || q > c_fit) c_fit = q;
        have = true;
    }
    if (have)
        os << "empirical coefficient sup measured/(log M)^" << fmt_shortest(rep.lower_log_power)
           << " = " << fmt_fixed4(c_fit) << "  vs lower coefficient "
           << fmt_fixed4(rep.lower_coef) << "\n";
    if (!caveat.empty()) os << "caveat: " << caveat << "\n";
    return 0;
}

int execute(const RunConfig& cfg) {
#ifdef _OPENMP
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif
    if (cfg.format != "table" && cfg.format != "csv" && cfg.format != "json")
        throw ScopeError("unknown output format " + cfg.format);
    Sink sink(cfg.out);
    if (cfg.command == "field info") return cmd_field_info(cfg, sink);
    if (cfg.command == "lattice vol") return cmd_lattice_vol(cfg, sink);
    if (cfg.command == "zeta") return cmd_zeta(cfg, sink);
    if (cfg.command == "ideals") return cmd_ideals(cfg, sink);
    if (cfg.command == "units") return cmd_units(cfg, sink);
    if (cfg.command == "detsum")
        return run_detsum(cfg, canonical_embedding_lattice(catalog_lookup(cfg.field)), sink);
    if (cfg.command == "qo check") return cmd_qo_check(cfg, sink);
    if (cfg.command == "qo detsum")
        return run_detsum(cfg, order_lattice(algebra_lookup(cfg.algebra)), sink);
    if (cfg.command == "compare") return cmd_compare(cfg, sink);
    if (cfg.command == "report") return cmd_report(cfg, sink);
    throw ScopeError("config carries no known command; got \"" + cfg.command + "\"");
}

void add_common_output(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--format", cfg.format, "output format: table, csv, or json")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    sub->add_option("--out", cfg.out, "write output to this file instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    std::string config_path;
    bool dump_config = false;

    CLI::App app{"inverse determinant sums of number-field and division-algebra lattices"};
    app.add_option("--config", config_path, "run from a config file written by --dump-config");
    app.add_flag("--dump-config", dump_config, "print the parsed run config as JSON and exit");
    app.add_option("--budget", cfg.budget,
                   "enumeration budget in predicted points (default: IDSUM_BUDGET env or 1e8)");
    app.add_option("--threads", cfg.threads, "OpenMP thread count (0 = runtime default)");
    app.fallthrough();

    auto* field = app.add_subcommand("field", "catalog number field commands");
    auto* finfo = field->add_subcommand("info", "print invariants of a catalog field");
    finfo->add_option("--field", cfg.field, "catalog field name")->required();
    add_common_output(finfo, cfg);
    finfo->callback([&] { cfg.command = "field info"; });

    auto* lat = app.add_subcommand("lattice", "matrix lattice commands");
    auto* lvol = lat->add_subcommand("vol", "shape and covolume of a lattice");
    auto* lf = lvol->add_option("--field", cfg.field, "catalog field name");
    lvol->add_option("--algebra", cfg.algebra, "catalog algebra name")->excludes(lf);
    lvol->add_option("--m", cfg.m, "exponent for the normalization factors (default 2)");
    add_common_output(lvol, cfg);
    lvol->callback([&] {
        if (cfg.field.empty() && cfg.algebra.empty())
            throw CLI::ValidationError("lattice vol needs --field or --algebra");
        cfg.command = "lattice vol";
    });

    auto* zeta = app.add_subcommand(
        "zeta", "truncated Dedekind zeta; rows n,z,cumulative,zeta (partial sum at s)");
    zeta->add_option("--field", cfg.field)->required();
    zeta->add_option("--s", cfg.s, "exponent s >= 1 (default 1)");
    zeta->add_option("--limit", cfg.limit, "truncation point M")->required();
    zeta->add_option("--checkpoints", cfg.checkpoints,
                     "rows only at these n (default: every n up to the limit)")
        ->delimiter(',');
    add_common_output(zeta, cfg);
    zeta->callback([&] { cfg.command = "zeta"; });

    auto* ideals = app.add_subcommand(
        "ideals", "cumulative ideal counts; rows M,count,main_term,abs_error,relative_error");
    ideals->add_option("--field", cfg.field)->required();
    ideals->add_option("--limit", cfg.limit, "sieve limit M")->required();
    ideals->add_option("--checkpoints", cfg.checkpoints, "report rows at these M (default: limit)")
        ->delimiter(',');
    add_common_output(ideals, cfg);
    ideals->callback([&] { cfg.command = "ideals"; });

    auto* units = app.add_subcommand(
        "units", "unit counts in Frobenius balls; rows M,count,predicted,residual");
    units->add_option("--field", cfg.field)->required();
    units->add_option("--radius", cfg.radius, "single ball radius M");
    units->add_option("--radii", cfg.radii, "radius grid")->delimiter(',');
    units->add_option("--log-radii", cfg.log_radii, "radius grid as exponents t, M = e^t")
        ->delimiter(',');
    add_common_output(units, cfg);
    units->callback([&] { cfg.command = "units"; });

    auto* detsum = app.add_subcommand(
        "detsum", "inverse determinant sum; rows M,m,value,point_count,min_abs_det");
    detsum->add_option("--field", cfg.field)->required();
    detsum->add_option("--radius", cfg.radius, "ball radius M");
    detsum->add_option("--radii", cfg.radii, "radius grid")->delimiter(',');
    detsum->add_option("--log-radii", cfg.log_radii, "radius grid as exponents t")->delimiter(',');
    detsum->add_option("--m", cfg.m, "exponent m")->required();
    detsum->add_flag("--normalized", cfg.normalized, "volume-normalized sum");
    detsum->add_flag("--legacy-scale", cfg.legacy_scale,
                     "scale-only normalization without the radius factor");
    detsum->add_option("--union", cfg.union_nr,
                       "also print the pairwise union bound for this block count");
    add_common_output(detsum, cfg);
    detsum->callback([&] { cfg.command = "detsum"; });

    auto* qo = app.add_subcommand("qo", "cyclic division algebra commands");
    auto* qcheck = qo->add_subcommand("check", "consistency checks and division certificate");
    qcheck->add_option("--algebra", cfg.algebra, "catalog algebra name")->required();
    add_common_output(qcheck, cfg);
    qcheck->callback([&] { cfg.command = "qo check"; });

    auto* qdetsum = qo->add_subcommand(
        "detsum", "inverse determinant sum over the order lattice; same rows as detsum");
    qdetsum->add_option("--algebra", cfg.algebra)->required();
    qdetsum->add_option("--radius", cfg.radius, "ball radius M");
    qdetsum->add_option("--radii", cfg.radii, "radius grid")->delimiter(',');
    qdetsum->add_option("--log-radii", cfg.log_radii, "radius grid as exponents t")
        ->delimiter(',');
    qdetsum->add_option("--m", cfg.m, "exponent m")->required();
    qdetsum->add_flag("--normalized", cfg.normalized, "volume-normalized sum");
    add_common_output(qdetsum, cfg);
    qdetsum->callback([&] { cfg.command = "qo detsum"; });

    auto* compare = app.add_subcommand(
        "compare", "normalized growth of an order code against a diagonal field code; "
                   "rows M,qo_value,nf_value,ratio");
    compare->add_option("--algebra", cfg.algebra, "order code side")->required();
    compare->add_option("--field", cfg.field, "number field side")->required();
    compare->add_option("--m", cfg.m, "common exponent m")->required();
    compare->add_option("--radii", cfg.radii, "radius grid")->delimiter(',');
    compare->add_option("--log-radii", cfg.log_radii, "radius grid as exponents t")
        ->delimiter(',');
    add_common_output(compare, cfg);
    compare->callback([&] { cfg.command = "compare"; });

    auto* report = app.add_subcommand(
        "report", "finite-radius bound table; rows M,measured,lower,upper,point_count,"
                  "verdict,pre_asymptotic");
    auto* rf = report->add_option("--field", cfg.field, "catalog field name");
    report->add_option("--algebra", cfg.algebra, "catalog algebra name")->excludes(rf);
    report->add_option("--m", cfg.m, "exponent m (totally real fields)");
    report->add_option("--nr", cfg.n_r, "block count n_r (complex fields and algebras)");
    report->add_option("--radii", cfg.radii, "radius grid (default: by lattice rank)")
        ->delimiter(',');
    report->add_option("--log-radii", cfg.log_radii, "radius grid as exponents t")->delimiter(',');
    report->add_option("--slack", cfg.slack, "verdict slack factor (default 2)");
    report->add_option("--zeta-limit", cfg.zeta_limit, "zeta truncation for the upper term");
    add_common_output(report, cfg);
    report->callback([&] {
        if (cfg.field.empty() && cfg.algebra.empty())
            throw CLI::ValidationError("report needs --field or --algebra");
        cfg.command = "report";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 64;  // help/version exit clean, parse errors are usage errors
    }

    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ScopeError("cannot read config file " + config_path);
            json j = json::parse(in);
            RunConfig loaded = j.get<RunConfig>();
            // command-line budget/threads still win over the stored values
            if (cfg.budget > 0) loaded.budget = cfg.budget;
            if (cfg.threads > 0) loaded.threads = cfg.threads;
            cfg = loaded;
        }
        if (cfg.command.empty()) {
            std::cerr << "error: no subcommand given (see --help)\n";
            return 64;
        }
        if (dump_config) {
            std::cout << json(cfg).dump(2) << "\n";
            return 0;
        }
        return execute(cfg);
    } catch (const BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 2;
    } catch (const ScopeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
