#include "idsum/numberfield.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>

#include "idsum/enum_kernel.hpp"
#include "json.hpp"

namespace idsum {

std::string catalog_data_path() {
    if (const char* env = std::getenv("IDSUM_DATA")) return std::string(env) + "/fields.json";
#ifdef IDSUM_DATA_DIR
    return std::string(IDSUM_DATA_DIR) + "/fields.json";
#else
    return "data/fields.json";
#endif
}

namespace {

using json = nlohmann::json;

// ---- polynomial helpers over Rat (dense ascending coefficients) ----

std::vector<Rat> poly_mul(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    std::vector<Rat> r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

// reduce mod the monic integer polynomial f (ascending, f.back() == 1)
std::vector<Rat> poly_mod(std::vector<Rat> a, const std::vector<int64_t>& f) {
    const size_t d = f.size() - 1;
    while (a.size() > d) {
        Rat lead = a.back();
        size_t off = a.size() - 1 - d;
        if (!lead.is_zero())
            for (size_t j = 0; j < d; ++j) a[off + j] -= lead * Rat(f[j]);
        a.pop_back();
    }
    a.resize(d, Rat(0));
    return a;
}

// ---- root finding: companion matrix + newton polish ----

std::vector<std::complex<double>> poly_roots(const std::vector<int64_t>& f) {
    const int d = int(f.size()) - 1;
    if (d == 1) return {std::complex<double>(-double(f[0]), 0.0)};
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -double(f[i]);
    Eigen::ComplexEigenSolver<Eigen::MatrixXd> es(comp);
    std::vector<std::complex<double>> roots(d);
    for (int i = 0; i < d; ++i) {
        std::complex<double> z = es.eigenvalues()(i);
        for (int it = 0; it < 50; ++it) {
            std::complex<double> p(1.0, 0.0), dp(0.0, 0.0);
            for (int j = d - 1; j >= 0; --j) {
                dp = dp * z + p;
                p = p * z + double(f[j]);
            }
            if (std::abs(dp) == 0.0) break;
            std::complex<double> step = p / dp;
            z -= step;
            if (std::abs(step) < 1e-15 * (1.0 + std::abs(z))) break;
        }
        roots[i] = z;
    }
    return roots;
}

json load_catalog_json() {
    std::ifstream in(catalog_data_path());
    if (!in) throw ScopeError("catalog file not found: " + catalog_data_path());
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ScopeError(std::string("catalog parse failure: ") + e.what());
    }
    return j;
}

std::vector<Rat> parse_rat_row(const json& row) {
    std::vector<Rat> out;
    for (const auto& v : row) out.push_back(Rat::parse(v.get<std::string>()));
    return out;
}

void check(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ScopeError("catalog consistency failure for " + field + ": " + what);
}

std::vector<int64_t> unit_vec(int d, int i) {
    std::vector<int64_t> v(size_t(d), 0);
    v[size_t(i)] = 1;
    return v;
}

// ---- load-time verification ----

void build_derived(NumberField& K) {
    const int d = K.degree;

    // roots, sorted: real ascending, then conjugate pairs by (re, im) of the
    // upper-half-plane representative
    auto raw = poly_roots(K.defining_polynomial);
    std::vector<double> reals;
    std::vector<std::complex<double>> reps;
    for (auto z : raw) {
        if (std::abs(z.imag()) < 1e-8)
            reals.push_back(z.real());
        else if (z.imag() > 0)
            reps.push_back(z);
    }
    std::sort(reals.begin(), reals.end());
    std::sort(reps.begin(), reps.end(), [](auto a, auto b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    K.r1 = int(reals.size());
    K.r2 = int(reps.size());
    check(K.r1 + 2 * K.r2 == d, K.name, "signature does not add up to the degree");
    K.totally_real = (K.r2 == 0);
    K.totally_complex = (K.r1 == 0);
    K.roots_all.clear();
    for (double r : reals) K.roots_all.emplace_back(r, 0.0);
    for (auto z : reps) {
        K.roots_all.push_back(z);
        K.roots_all.push_back(std::conj(z));
    }

    // embedding matrices: sigma_e(w_j) = sum_k B[j][k] theta_e^k
    K.emb_all.resize(d, d);
    for (int e = 0; e < d; ++e) {
        std::complex<double> th = K.roots_all[size_t(e)];
        std::complex<double> pw(1.0, 0.0);
        std::vector<std::complex<double>> powers(d);
        for (int k = 0; k < d; ++k) {
            powers[k] = pw;
            pw *= th;
        }
        for (int j = 0; j < d; ++j) {
            std::complex<double> v(0.0, 0.0);
            for (int k = 0; k < d; ++k) v += K.integral_basis[size_t(j)][size_t(k)].to_double() * powers[size_t(k)];
            K.emb_all(e, j) = v;
        }
    }
    K.emb_chosen.resize(K.r1 + K.r2, d);
    for (int e = 0; e < K.r1; ++e) K.emb_chosen.row(e) = K.emb_all.row(e);
    for (int t = 0; t < K.r2; ++t) K.emb_chosen.row(K.r1 + t) = K.emb_all.row(K.r1 + 2 * t);
    K.emb_all_inv = K.emb_all.inverse();

    // multiplication table over the integral basis; structure constants of a
    // genuine integral basis are integers, anything else is a corrupt catalog
    const size_t sd = size_t(d);
    std::vector<std::vector<Rat>> tt(sd, std::vector<Rat>(sd));  // T^T for solves
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) tt[size_t(i)][size_t(j)] = K.integral_basis[size_t(j)][size_t(i)];
    K.mult_table.assign(size_t(d), std::vector<std::vector<int64_t>>(size_t(d), std::vector<int64_t>(size_t(d))));
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            auto prod = poly_mod(poly_mul(K.integral_basis[size_t(i)], K.integral_basis[size_t(j)]),
                                 K.defining_polynomial);
            auto c = rat_solve(tt, prod);
            for (int k = 0; k < d; ++k) {
                check(c[size_t(k)].is_integer(), K.name, "non-integral structure constant");
                K.mult_table[size_t(i)][size_t(j)][size_t(k)] = c[size_t(k)].num;
                K.mult_table[size_t(j)][size_t(i)][size_t(k)] = c[size_t(k)].num;
            }
        }
    }
}

Eigen::MatrixXd trace_form_gram(const NumberField& K) {
    Eigen::MatrixXcd a = K.emb_all;
    Eigen::MatrixXcd g = a.adjoint() * a;
    return g.real();
}

void verify_field(NumberField& K) {
    const int d = K.degree;

    // trace form (Minkowski) Gram determinant equals |discriminant|
    Eigen::MatrixXd g = trace_form_gram(K);
    double gd = g.determinant();
    double target = std::abs(double(K.discriminant));
    check(std::abs(gd - target) <= 1e-9 * target, K.name, "trace form determinant vs discriminant");

    // torsion: exhaustive search for elements with all embeddings on the unit
    // circle; every candidate is confirmed exactly by raising to small powers
    auto sp = K.shared_from_this();
    std::vector<std::vector<int64_t>> torsion;
    struct TorsionVisitor : EnumSink {
        const NumberField* K;
        std::vector<std::vector<int64_t>>* out;
        void leaf(const int32_t* x, double) {
            bool zero = true;
            for (int j = 0; j < K->degree; ++j)
                if (x[j]) zero = false;
            if (zero) return;
            for (int e = 0; e < K->degree; ++e) {
                std::complex<double> v(0, 0);
                for (int j = 0; j < K->degree; ++j) v += double(x[j]) * K->emb_all(e, j);
                if (std::abs(std::abs(v) - 1.0) > 1e-9) return;
            }
            out->push_back(std::vector<int64_t>(x, x + K->degree));
        }
    } tv;
    tv.K = &K;
    tv.out = &torsion;
    enumerate_full(g, double(d) + 1e-6, tv);
    // exact confirmation
    std::vector<std::vector<int64_t>> confirmed;
    for (const auto& cand : torsion) {
        FieldElement x = FieldElement::from_int_coords(sp, cand);
        FieldElement p = x;
        bool is_torsion = false;
        for (int m = 1; m <= 120 && !is_torsion; ++m) {
            if (p == FieldElement::one(sp)) is_torsion = true;
            else p = p * x;
        }
        if (is_torsion) confirmed.push_back(cand);
    }
    check(int(confirmed.size()) == K.roots_of_unity, K.name,
          "root-of-unity count disagrees with exhaustive search");
    K.torsion_units = std::move(confirmed);

    // fundamental units: one per unit rank, each of exact norm +-1,
    // and their log embedding matrix reproduces the regulator
    check(int(K.fundamental_units.size()) == K.unit_rank(), K.name, "fundamental unit count vs unit rank");
    for (const auto& uc : K.fundamental_units) {
        FieldElement u = K.element(uc);
        check(u.is_integral(), K.name, "fundamental unit not integral");
        Rat n = u.norm();
        check(n == Rat(1) || n == Rat(-1), K.name, "fundamental unit norm is not a unit");
    }
    const int rank = K.unit_rank();
    if (rank > 0) {
        Eigen::MatrixXd lm(rank, rank);
        for (int j = 0; j < rank; ++j) {
            FieldElement u = K.element(K.fundamental_units[size_t(j)]);
            for (int i = 0; i < rank; ++i) {
                double w = (i < K.r1) ? 1.0 : 2.0;
                lm(i, j) = w * std::log(std::abs(u.embed(i)));
            }
        }
        double reg = std::abs(lm.determinant());
        check(std::abs(reg - K.regulator) <= 1e-9 * K.regulator, K.name,
              "regulator vs fundamental unit logs");
    } else {
        check(K.regulator == 1.0, K.name, "rank-zero field must ship regulator 1");
    }

    // conjugation must be an exact ring involution that matches complex
    // conjugation on the chosen embeddings
    check(int(K.conjugation.size()) == d, K.name, "conjugation matrix shape");
    auto conj_elem = [&](const FieldElement& x) { return x.conj(); };
    for (int i = 0; i < d; ++i) {
        FieldElement wi = FieldElement::from_int_coords(sp, unit_vec(d, i));
        FieldElement ci = conj_elem(wi);
        check(conj_elem(ci) == wi, K.name, "conjugation is not an involution");
        for (int j = i; j < d; ++j) {
            FieldElement wj = FieldElement::from_int_coords(sp, unit_vec(d, j));
            check(conj_elem(wi * wj) == ci * conj_elem(wj), K.name,
                  "conjugation is not multiplicative");
        }
        for (int e = 0; e < K.chosen_count(); ++e) {
            std::complex<double> lhs = ci.embed(e);
            std::complex<double> rhs = std::conj(wi.embed(e));
            check(std::abs(lhs - rhs) <= 1e-8 * (1.0 + std::abs(rhs)), K.name,
                  "conjugation does not match complex conjugation");
        }
    }

    for (const auto& [p, degs] : K.special_primes) {
        check(p >= 2 && !degs.empty(), K.name, "malformed special prime entry");
        int s = 0;
        for (int f : degs) {
            check(f >= 1, K.name, "bad residue degree");
            s += f;
        }
        check(s <= d, K.name, "residue degrees exceed the field degree");
    }
}

std::shared_ptr<NumberField> load_field(const json& jf) {
    auto K = std::make_shared<NumberField>();
    K->name = jf.at("name").get<std::string>();
    for (const auto& c : jf.at("defining_polynomial")) K->defining_polynomial.push_back(c.get<int64_t>());
    check(K->defining_polynomial.size() >= 2, K->name, "defining polynomial too short");
    check(K->defining_polynomial.back() == 1, K->name, "defining polynomial must be monic");
    K->degree = int(K->defining_polynomial.size()) - 1;
    for (const auto& row : jf.at("integral_basis")) K->integral_basis.push_back(parse_rat_row(row));
    check(int(K->integral_basis.size()) == K->degree, K->name, "integral basis row count");
    for (auto& row : K->integral_basis) {
        check(int(row.size()) == K->degree, K->name, "integral basis column count");
    }
    check(K->integral_basis[0][0] == Rat(1), K->name, "first basis element must be 1");
    for (int k = 1; k < K->degree; ++k)
        check(K->integral_basis[0][size_t(k)].is_zero(), K->name, "first basis element must be 1");
    K->discriminant = jf.at("discriminant").get<int64_t>();
    K->class_number = jf.at("class_number").get<int>();
    K->regulator = jf.at("regulator").get<double>();
    K->roots_of_unity = jf.at("roots_of_unity").get<int>();
    for (const auto& row : jf.at("fundamental_units")) K->fundamental_units.push_back(parse_rat_row(row));
    for (const auto& row : jf.at("conjugation")) {
        std::vector<int64_t> r;
        for (const auto& v : row) r.push_back(v.get<int64_t>());
        K->conjugation.push_back(std::move(r));
    }
    for (const auto& e : jf.at("special_primes")) {
        int64_t p = e.at(0).get<int64_t>();
        std::vector<int> degs;
        for (const auto& f : e.at(1)) degs.push_back(f.get<int>());
        K->special_primes.emplace_back(p, std::move(degs));
    }
    if (jf.contains("unit_caveat")) K->unit_caveat = jf.at("unit_caveat").get<std::string>();
    build_derived(*K);
    verify_field(*K);
    return K;
}

std::mutex g_cat_mutex;
std::map<std::string, FieldPtr>& field_cache() {
    static std::map<std::string, FieldPtr> c;
    return c;
}

}  // namespace

// ---- FieldElement ----

bool FieldElement::is_zero() const {
    for (const auto& c : coords)
        if (!c.is_zero()) return false;
    return true;
}

bool FieldElement::is_integral() const {
    for (const auto& c : coords)
        if (!c.is_integer()) return false;
    return true;
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    FieldElement r(field, coords);
    for (size_t i = 0; i < coords.size(); ++i) r.coords[i] += o.coords[i];
    return r;
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    FieldElement r(field, coords);
    for (size_t i = 0; i < coords.size(); ++i) r.coords[i] -= o.coords[i];
    return r;
}

FieldElement FieldElement::operator-() const {
    FieldElement r(field, coords);
    for (auto& c : r.coords) c = -c;
    return r;
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    const int d = field->degree;
    std::vector<Rat> out(size_t(d), Rat(0));
    for (int i = 0; i < d; ++i) {
        if (coords[size_t(i)].is_zero()) continue;
        for (int j = 0; j < d; ++j) {
            if (o.coords[size_t(j)].is_zero()) continue;
            Rat xy = coords[size_t(i)] * o.coords[size_t(j)];
            const auto& t = field->mult_table[size_t(i)][size_t(j)];
            for (int k = 0; k < d; ++k)
                if (t[size_t(k)]) out[size_t(k)] += xy * Rat(t[size_t(k)]);
        }
    }
    return FieldElement(field, std::move(out));
}

FieldElement FieldElement::conj() const {
    const int d = field->degree;
    std::vector<Rat> out(size_t(d), Rat(0));
    for (int j = 0; j < d; ++j) {
        if (coords[size_t(j)].is_zero()) continue;
        for (int k = 0; k < d; ++k) {
            int64_t m = field->conjugation[size_t(j)][size_t(k)];
            if (m) out[size_t(k)] += coords[size_t(j)] * Rat(m);
        }
    }
    return FieldElement(field, std::move(out));
}

Rat FieldElement::norm() const {
    const int d = field->degree;
    // determinant of the multiplication-by-x matrix over the integral basis
    const size_t sd = size_t(d);
    std::vector<std::vector<Rat>> m(sd, std::vector<Rat>(sd));
    for (int j = 0; j < d; ++j) {
        // column j: coordinates of x * w_j
        for (int i = 0; i < d; ++i) {
            if (coords[size_t(i)].is_zero()) continue;
            const auto& t = field->mult_table[size_t(i)][size_t(j)];
            for (int k = 0; k < d; ++k)
                if (t[size_t(k)]) m[size_t(k)][size_t(j)] += coords[size_t(i)] * Rat(t[size_t(k)]);
        }
    }
    return rat_det(m);
}

std::complex<double> FieldElement::embed(int e) const {
    std::complex<double> v(0.0, 0.0);
    for (int j = 0; j < field->degree; ++j) v += coords[size_t(j)].to_double() * field->emb_chosen(e, j);
    return v;
}

double FieldElement::t2_norm2() const {
    double s = 0.0;
    for (int e = 0; e < field->chosen_count(); ++e) {
        double w = (e < field->r1) ? 1.0 : 2.0;
        s += w * std::norm(embed(e));
    }
    return s;
}

FieldElement FieldElement::one(const FieldPtr& k) {
    std::vector<Rat> c(size_t(k->degree), Rat(0));
    c[0] = Rat(1);  // basis element 0 is the constant 1, enforced at load
    return FieldElement(k, std::move(c));
}

FieldElement FieldElement::from_int_coords(const FieldPtr& k, const std::vector<int64_t>& c) {
    std::vector<Rat> r(c.size());
    for (size_t i = 0; i < c.size(); ++i) r[i] = Rat(c[i]);
    return FieldElement(k, std::move(r));
}

FieldElement NumberField::element(const std::vector<Rat>& c) const {
    return FieldElement(shared_from_this(), c);
}

FieldElement NumberField::element_int(const std::vector<int64_t>& c) const {
    return FieldElement::from_int_coords(shared_from_this(), c);
}

// ---- catalog ----

FieldPtr catalog_lookup(const std::string& name) {
    std::lock_guard<std::mutex> lock(g_cat_mutex);
    auto& cache = field_cache();
    auto it = cache.find(name);
    if (it != cache.end()) return it->second;
    json j = load_catalog_json();
    for (const auto& jf : j.at("fields")) {
        if (jf.at("name").get<std::string>() == name) {
            FieldPtr K = load_field(jf);
            cache[name] = K;
            return K;
        }
    }
    throw ScopeError("unknown field in catalog lookup: " + name);
}

std::vector<std::string> catalog_field_names() {
    json j = load_catalog_json();
    std::vector<std::string> names;
    for (const auto& jf : j.at("fields")) names.push_back(jf.at("name").get<std::string>());
    return names;
}

// ---- constants ----

ResidueConstant residue_constant(const FieldPtr& K) {
    double alpha = std::pow(2.0, K->r1) * std::pow(2.0 * M_PI, K->r2) * K->regulator /
                   (double(K->roots_of_unity) * std::sqrt(std::abs(double(K->discriminant))));
    return {alpha, alpha * K->class_number};
}

double unit_density_constant(const FieldPtr& K, int n) {
    if (K->r1 > 0 && K->r2 > 0)
        throw ScopeError("unit density constant needs a totally real or totally complex field");
    if (n != K->matrix_size())
        throw ScopeError("dimension mismatch: field " + K->name + " embeds in side " +
                         std::to_string(K->matrix_size()) + " matrices, not " + std::to_string(n));
    return K->roots_of_unity * std::pow(double(n), n - 1) / (K->regulator * std::tgamma(double(n)));
}

BoundConstants normalized_bound_constants(const FieldPtr& K, double m) {
    if (!(m >= 1.0)) throw ScopeError("normalized bound constants need m >= 1");
    if (K->r1 > 0 && K->r2 > 0)
        throw ScopeError("unsupported signature: field " + K->name + " is neither totally real nor totally complex");
    const int n = K->matrix_size();
    const double nk = unit_density_constant(K, n);
    const double sd = std::sqrt(std::abs(double(K->discriminant)));
    BoundConstants out;
    if (K->totally_real) {
        out.n_tilde = nk * std::pow(sd, m);
        if (m == 1.0) {
            out.tag = "totally_real_m1";
            out.c_k = K->class_number * std::pow(2.0, n) * std::pow(double(n), n) / std::tgamma(double(n));
        } else {
            out.tag = "totally_real";
            out.c_k = 0.0;
        }
    } else {
        if (m != 2.0 * std::floor(m / 2.0))
            throw ScopeError("totally complex fields need an even exponent (m = 2 n_r)");
        const int nr = int(m / 2.0);
        out.n_tilde = nk * std::pow(std::pow(2.0, -n) * sd, nr);
        if (nr == 1) {
            out.tag = "totally_complex_nr1";
            out.c_k = K->class_number * std::pow(M_PI, n) * 2.0 * std::pow(double(n), n) /
                      (K->regulator * std::tgamma(double(n)));
        } else {
            out.tag = "totally_complex";
            out.c_k = 0.0;
        }
    }
    return out;
}

}  // namespace idsum
