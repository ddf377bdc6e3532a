#include "idsum/qoalgebra.hpp"

#include <cmath>
#include <limits>
#include <fstream>
#include <map>
#include <mutex>

#include "json.hpp"

#include "idsum/detsum.hpp"
#include "idsum/util.hpp"

namespace idsum {

using json = nlohmann::json;

namespace {

std::vector<Rat> parse_row(const json& row) {
    std::vector<Rat> out;
    for (const auto& v : row) out.push_back(Rat::parse(v.get<std::string>()));
    return out;
}

void require(bool ok, const std::string& name, const std::string& what) {
    if (!ok) throw ScopeError("algebra consistency failure for " + name + ": " + what);
}

// image of a K (or F) element under a basis-to-E-coordinates map
FieldElement map_into(const FieldPtr& E, const std::vector<std::vector<Rat>>& rows,
                      const std::vector<Rat>& coords) {
    std::vector<Rat> out(size_t(E->degree), Rat(0));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < out.size(); ++j) out[j] += coords[i] * rows[i][j];
    return E->element(out);
}

// the map must send 1 to 1 and respect products of integral basis elements
void check_ring_map(const FieldPtr& From, const FieldPtr& E,
                    const std::vector<std::vector<Rat>>& rows, const std::string& name,
                    const std::string& label) {
    require(int(rows.size()) == From->degree, name, label + " row count");
    for (const auto& r : rows) require(int(r.size()) == E->degree, name, label + " column count");
    std::vector<Rat> one(size_t(From->degree), Rat(0));
    one[0] = Rat(1);
    require(map_into(E, rows, one) == FieldElement::one(E), name, label + " must send 1 to 1");
    for (int i = 0; i < From->degree; ++i) {
        std::vector<Rat> ei(size_t(From->degree), Rat(0));
        ei[size_t(i)] = Rat(1);
        for (int j = i; j < From->degree; ++j) {
            std::vector<Rat> ej(size_t(From->degree), Rat(0));
            ej[size_t(j)] = Rat(1);
            FieldElement prod = From->element(ei) * From->element(ej);
            FieldElement lhs = map_into(E, rows, prod.coords);
            FieldElement rhs = map_into(E, rows, ei) * map_into(E, rows, ej);
            require(lhs == rhs, name, label + " is not multiplicative on basis pair (" +
                                          std::to_string(i) + "," + std::to_string(j) + ")");
        }
    }
}

std::shared_ptr<CyclicAlgebraCode> build_algebra(const json& ja) {
    auto A = std::make_shared<CyclicAlgebraCode>();
    A->name = ja.at("name").get<std::string>();
    A->F = catalog_lookup(ja.at("base_field").get<std::string>());
    A->K = catalog_lookup(ja.at("center").get<std::string>());
    A->E = catalog_lookup(ja.at("maximal_field").get<std::string>());
    const std::string& name = A->name;

    require(A->F->degree == 2 && A->F->totally_complex, name, "base field must be complex quadratic");
    require(A->K->totally_real, name, "center must be totally real");
    require(A->E->totally_complex, name, "compositum must be totally complex");
    require(A->E->degree == 2 * A->K->degree, name,
            "compositum degree must be twice the center degree (K and F must be linearly disjoint)");

    A->gamma_k = parse_row(ja.at("gamma"));
    require(int(A->gamma_k.size()) == A->K->degree, name, "gamma coordinate count");
    bool gz = true;
    for (const Rat& c : A->gamma_k) {
        require(c.den == 1, name, "gamma must be an algebraic integer of the center");
        if (!c.is_zero()) gz = false;
    }
    require(!gz, name, "gamma must be nonzero");

    for (const auto& row : ja.at("center_in_maximal")) A->center_map.push_back(parse_row(row));
    for (const auto& row : ja.at("base_in_maximal")) A->base_map.push_back(parse_row(row));
    check_ring_map(A->K, A->E, A->center_map, name, "center embedding");
    check_ring_map(A->F, A->E, A->base_map, name, "base field embedding");
    A->gamma_e = map_into(A->E, A->center_map, A->gamma_k);

    // conjugation of E must fix the center image and restrict to the base
    // field's conjugation
    for (int i = 0; i < A->K->degree; ++i) {
        std::vector<Rat> ei(size_t(A->K->degree), Rat(0));
        ei[size_t(i)] = Rat(1);
        FieldElement im = map_into(A->E, A->center_map, ei);
        require(im.conj() == im, name, "conjugation must fix the center");
    }
    for (int i = 0; i < 2; ++i) {
        std::vector<Rat> ei(2, Rat(0));
        ei[size_t(i)] = Rat(1);
        FieldElement f = A->F->element(ei);
        FieldElement lhs = map_into(A->E, A->base_map, ei).conj();
        FieldElement rhs = map_into(A->E, A->base_map, f.conj().coords);
        require(lhs == rhs, name, "conjugation must restrict to the base field's conjugation");
    }

    // matched embeddings: block i extends the i-th real embedding of K and is
    // oriented so the base field's imaginary element lands in the upper half
    // plane. orientation reference: w - conj(w) for the second F basis vector
    std::vector<Rat> w1(2, Rat(0));
    w1[1] = Rat(1);
    FieldElement fw = map_into(A->E, A->base_map, w1);
    FieldElement orient = fw - fw.conj();
    require(!orient.is_zero(), name, "base field has no imaginary part");

    const int k = A->K->degree;
    const int ed = A->E->degree;
    A->tau_rows.resize(k, ed);
    A->tau_index.resize(size_t(k));
    A->gamma_at.resize(size_t(k));
    std::vector<bool> taken(size_t(ed), false);
    for (int i = 0; i < k; ++i) {
        int found = -1;
        for (int e = 0; e < ed; ++e) {
            if (taken[size_t(e)]) continue;
            // restriction test on every center basis image
            bool match = true;
            for (int b = 0; b < k && match; ++b) {
                std::vector<Rat> eb(size_t(k), Rat(0));
                eb[size_t(b)] = Rat(1);
                FieldElement im = map_into(A->E, A->center_map, eb);
                std::complex<double> val = 0;
                for (int j = 0; j < ed; ++j) val += A->E->emb_all(e, j) * im.coords[size_t(j)].to_double();
                std::complex<double> want = A->K->element(eb).embed(i);
                if (std::abs(val - want) > 1e-6) match = false;
            }
            if (!match) continue;
            std::complex<double> ov = 0;
            for (int j = 0; j < ed; ++j) ov += A->E->emb_all(e, j) * orient.coords[size_t(j)].to_double();
            if (ov.imag() <= 0) continue;
            require(found < 0, name, "ambiguous matched embedding for block " + std::to_string(i));
            found = e;
        }
        require(found >= 0, name, "no matched embedding extends real embedding " + std::to_string(i));
        taken[size_t(found)] = true;
        A->tau_index[size_t(i)] = found;
        A->tau_rows.row(i) = A->E->emb_all.row(found);
        // the embedding must intertwine conjugation with complex conjugation
        for (int j = 0; j < ed; ++j) {
            std::vector<Rat> ej(size_t(ed), Rat(0));
            ej[size_t(j)] = Rat(1);
            FieldElement w = A->E->element(ej);
            std::complex<double> lhs = A->tau(i, w.conj());
            std::complex<double> rhs = std::conj(A->tau(i, w));
            require(std::abs(lhs - rhs) <= 1e-9 * (1.0 + std::abs(rhs)), name,
                    "embedding " + std::to_string(found) + " does not intertwine conjugation");
        }
        std::complex<double> g = A->tau(i, A->gamma_e);
        require(std::abs(g.imag()) <= 1e-9 * (1.0 + std::abs(g)), name, "gamma is not real at block " + std::to_string(i));
        A->gamma_at[size_t(i)] = g.real();
    }

    // order basis: natural order by default
    if (ja.contains("order_basis")) {
        for (const auto& pair : ja.at("order_basis")) {
            std::vector<Rat> c1 = parse_row(pair.at(0));
            std::vector<Rat> c2 = parse_row(pair.at(1));
            require(int(c1.size()) == ed && int(c2.size()) == ed, name, "order basis coordinate count");
            A->order_basis.emplace_back(std::move(c1), std::move(c2));
        }
    } else {
        for (int part = 0; part < 2; ++part)
            for (int j = 0; j < ed; ++j) {
                std::vector<Rat> c1(size_t(ed), Rat(0)), c2(size_t(ed), Rat(0));
                (part == 0 ? c1 : c2)[size_t(j)] = Rat(1);
                A->order_basis.emplace_back(std::move(c1), std::move(c2));
            }
    }
    const int rank = 2 * ed;
    require(int(A->order_basis.size()) == rank, name, "order basis must have 4k elements");

    // expansion matrix: solve against the transpose of the stacked basis rows
    const size_t srank = size_t(rank);
    std::vector<std::vector<Rat>> bt(srank, std::vector<Rat>(srank));
    for (int j = 0; j < rank; ++j)
        for (int i = 0; i < rank; ++i) {
            const auto& [c1, c2] = A->order_basis[size_t(j)];
            bt[size_t(i)][size_t(j)] = i < ed ? c1[size_t(i)] : c2[size_t(i - ed)];
        }
    try {
        A->order_expand = rat_inverse(bt);
    } catch (const std::domain_error&) {
        throw ScopeError("degenerate order in " + name + ": basis elements are linearly dependent");
    }

    // ring closure: all pairwise products re-expand with integer coordinates
    for (int i = 0; i < rank; ++i) {
        AlgebraElement bi = A->element_pair(A->order_basis[size_t(i)].first, A->order_basis[size_t(i)].second);
        for (int j = 0; j < rank; ++j) {
            AlgebraElement bj = A->element_pair(A->order_basis[size_t(j)].first, A->order_basis[size_t(j)].second);
            AlgebraElement p = bi * bj;
            for (int r = 0; r < rank; ++r) {
                Rat acc(0);
                for (int c = 0; c < rank; ++c) {
                    const Rat& pc = c < ed ? p.x1.coords[size_t(c)] : p.x2.coords[size_t(c - ed)];
                    acc += A->order_expand[size_t(r)][size_t(c)] * pc;
                }
                require(acc.den == 1, name,
                        "order is not closed under multiplication: product of basis elements " +
                            std::to_string(i) + " and " + std::to_string(j) +
                            " has a non-integer coordinate");
            }
        }
    }

    // empirical non-splitting certificate: no small lattice point with
    // vanishing (or sub-unit) determinant
    MatrixLattice L = order_lattice(A);
    try {
        EnumOptions probe_opt;
        probe_opt.budget = 1e7;
        DetSumResult r = inverse_det_sum(L, 12.0, 2.0, probe_opt);
        A->division_certificate = {12.0, r.point_count, r.min_abs_det};
    } catch (const NVDError&) {
        A->division_certificate = {12.0, 0, 0.0};
    }
    return A;
}

std::mutex g_alg_mutex;
std::map<std::string, AlgebraPtr>& algebra_cache() {
    static std::map<std::string, AlgebraPtr> c;
    return c;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScopeError("algebra config file not found: " + path);
    json j;
    in >> j;
    return j;
}

AlgebraPtr lookup_in(const json& doc, const std::string& name, const std::string& where) {
    if (doc.contains("algebras"))
        for (const auto& ja : doc.at("algebras"))
            if (ja.at("name").get<std::string>() == name) return build_algebra(ja);
    throw ScopeError("algebra " + name + " not found in " + where);
}

}  // namespace

AlgebraElement CyclicAlgebraCode::element(const FieldElement& a1, const FieldElement& a2) const {
    return AlgebraElement(shared_from_this(), a1, a2);
}

AlgebraElement CyclicAlgebraCode::element_pair(const std::vector<Rat>& c1,
                                               const std::vector<Rat>& c2) const {
    return AlgebraElement(shared_from_this(), E->element(c1), E->element(c2));
}

AlgebraElement CyclicAlgebraCode::one() const {
    std::vector<Rat> zero(size_t(E->degree), Rat(0));
    return AlgebraElement(shared_from_this(), FieldElement::one(E), E->element(zero));
}

std::complex<double> CyclicAlgebraCode::tau(int i, const FieldElement& x) const {
    std::complex<double> v = 0;
    for (int j = 0; j < E->degree; ++j) v += tau_rows(i, j) * x.coords[size_t(j)].to_double();
    return v;
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
    return AlgebraElement(parent, x1 + o.x1, x2 + o.x2);
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
    return AlgebraElement(parent, x1 - o.x1, x2 - o.x2);
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
    // (x1 + u x2)(y1 + u y2) = (x1 y1 + gamma x2* y2) + u (x1* y2 + x2 y1)
    FieldElement z1 = x1 * o.x1 + parent->gamma_e * x2.conj() * o.x2;
    FieldElement z2 = x1.conj() * o.x2 + x2 * o.x1;
    return AlgebraElement(parent, z1, z2);
}

AlgebraPtr algebra_lookup(const std::string& name) {
    std::lock_guard<std::mutex> g(g_alg_mutex);
    auto& cache = algebra_cache();
    auto it = cache.find(name);
    if (it != cache.end()) return it->second;
    AlgebraPtr A = lookup_in(load_json_file(catalog_data_path()), name, "the catalog");
    cache[name] = A;
    return A;
}

std::vector<std::string> catalog_algebra_names() {
    json doc = load_json_file(catalog_data_path());
    std::vector<std::string> out;
    if (doc.contains("algebras"))
        for (const auto& ja : doc.at("algebras")) out.push_back(ja.at("name").get<std::string>());
    return out;
}

AlgebraPtr load_algebra_config(const std::string& path, const std::string& name) {
    return lookup_in(load_json_file(path), name, path);
}

Eigen::Matrix2cd phi(const AlgebraElement& a) {
    const auto& A = *a.parent;
    Eigen::Matrix2cd m;
    std::complex<double> v1 = A.tau(0, a.x1);
    std::complex<double> v2 = A.tau(0, a.x2);
    m(0, 0) = v1;
    m(0, 1) = v2;
    m(1, 0) = A.gamma_at[0] * std::conj(v2);
    m(1, 1) = std::conj(v1);
    return m;
}

Eigen::MatrixXcd multiblock_psi(const AlgebraElement& a) {
    const auto& A = *a.parent;
    const int k = A.k();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2 * k, 2 * k);
    for (int i = 0; i < k; ++i) {
        std::complex<double> v1 = A.tau(i, a.x1);
        std::complex<double> v2 = A.tau(i, a.x2);
        m(2 * i, 2 * i) = v1;
        m(2 * i, 2 * i + 1) = v2;
        m(2 * i + 1, 2 * i) = A.gamma_at[size_t(i)] * std::conj(v2);
        m(2 * i + 1, 2 * i + 1) = std::conj(v1);
    }
    return m;
}

namespace {

// det psi from the 2k linear forms (tau_i(x1), tau_i(x2)) per point:
// each block contributes |a_i|^2 - gamma_i |b_i|^2
struct AlgebraTag : ElementTag {
    Eigen::MatrixXcd f;  // 2k x 4k
    std::vector<double> gamma_at;

    int form_count() const override { return int(f.rows()); }
    const Eigen::MatrixXcd& forms() const override { return f; }
    double det2(const std::complex<double>* acc) const override {
        double d = 1.0;
        for (size_t i = 0; i < gamma_at.size(); ++i)
            d *= std::norm(acc[2 * i]) - gamma_at[i] * std::norm(acc[2 * i + 1]);
        return snap_det2(d * d);
    }
};

}  // namespace

MatrixLattice order_lattice(const AlgebraPtr& A) {
    const int rank = 2 * A->E->degree;
    const int n = A->matrix_size();
    MatrixLattice L;
    L.rank = rank;
    L.matrix_size = n;
    L.label = "psi(Lambda_" + A->name + ")";
    for (const auto& [c1, c2] : A->order_basis)
        L.basis.push_back(multiblock_psi(A->element_pair(c1, c2)));
    L.gram.resize(rank, rank);
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j <= i; ++j) {
            double v = (L.basis[size_t(i)].cwiseProduct(L.basis[size_t(j)].conjugate())).sum().real();
            L.gram(i, j) = v;
            L.gram(j, i) = v;
        }
    Eigen::LLT<Eigen::MatrixXd> llt(L.gram);
    if (llt.info() != Eigen::Success)
        throw ScopeError("degenerate order in " + A->name + ": Gram matrix is not positive definite");
    L.volume = std::sqrt(L.gram.determinant());

    auto tag = std::make_shared<AlgebraTag>();
    tag->f.resize(2 * A->k(), rank);
    tag->gamma_at = A->gamma_at;
    for (int j = 0; j < rank; ++j) {
        const auto& [c1, c2] = A->order_basis[size_t(j)];
        AlgebraElement b = A->element_pair(c1, c2);
        for (int i = 0; i < A->k(); ++i) {
            tag->f(2 * i, j) = A->tau(i, b.x1);
            tag->f(2 * i + 1, j) = A->tau(i, b.x2);
        }
    }
    L.element_tag = tag;
    return L;
}

int64_t principal_ideal_index(const AlgebraPtr& A, const AlgebraElement& x) {
    if (x.is_zero()) throw ScopeError("principal ideal index of the zero element is undefined");
    const int ed = A->E->degree;
    const int rank = 2 * ed;

    const size_t srank = size_t(rank);
    auto expand = [&](const AlgebraElement& a) {
        std::vector<Rat> out(srank, Rat(0));
        for (int r = 0; r < rank; ++r) {
            Rat acc(0);
            for (int c = 0; c < rank; ++c) {
                const Rat& pc = c < ed ? a.x1.coords[size_t(c)] : a.x2.coords[size_t(c - ed)];
                acc += A->order_expand[size_t(r)][size_t(c)] * pc;
            }
            out[size_t(r)] = acc;
        }
        return out;
    };

    std::vector<Rat> xc = expand(x);
    for (const Rat& c : xc)
        if (c.den != 1)
            throw ScopeError("element is not in the order: expansion over the order basis has a non-integer coordinate");

    std::vector<std::vector<int128>> rm(srank, std::vector<int128>(srank));
    for (int j = 0; j < rank; ++j) {
        const auto& [c1, c2] = A->order_basis[size_t(j)];
        std::vector<Rat> row = expand(A->element_pair(c1, c2) * x);
        for (int r = 0; r < rank; ++r) {
            if (row[size_t(r)].den != 1)
                throw ScopeError("element is not in the order: right multiplication leaves the order");
            rm[size_t(j)][size_t(r)] = row[size_t(r)].num;
        }
    }
    int128 det = bareiss_det(std::move(rm));
    if (det < 0) det = -det;
    int64_t index = check_narrow(det);

    double dpsi = std::abs(multiblock_psi(x).determinant());
    double q2 = dpsi * dpsi;
    if (std::abs(q2 - double(index)) > 1e-9 * std::max(1.0, double(index)))
        throw std::runtime_error("representation determinant disagrees with the module index for " + A->name);
    return index;
}

OrthogonalityCheck orthogonality_check(const AlgebraPtr& A, const FieldElement& x,
                                       const FieldElement& y) {
    if (!x.is_integral() || !y.is_integral())
        throw ScopeError("orthogonality check takes integral elements of the compositum");
    std::vector<Rat> zero(size_t(A->E->degree), Rat(0));
    Eigen::MatrixXcd px = multiblock_psi(A->element(x, A->E->element(zero)));
    Eigen::MatrixXcd puy = multiblock_psi(A->element(A->E->element(zero), y));
    OrthogonalityCheck out;
    out.lhs = (px + puy).squaredNorm();
    out.rhs = px.squaredNorm() + puy.squaredNorm();
    out.defect = std::abs(out.lhs - out.rhs);
    return out;
}

QoGrowthBounds qo_growth_bounds(const AlgebraPtr& A, double M, int n_r, const EnumOptions& opt) {
    if (n_r < 2)
        throw ScopeError("growth bounds are out of scope for n_r = " + std::to_string(n_r) +
                         ": the shape claim needs n_r > 1");
    const double e = std::exp(1.0);
    if (M < e - 1e-12) throw ScopeError("growth bounds need M >= e");

    const int k = A->k();
    const double logM = std::log(M);
    QoGrowthBounds out;
    out.lower = std::pow(logM, double(k - 1)) * double(A->K->roots_of_unity) *
                std::pow(double(k), double(k - 1)) / (A->K->regulator * std::tgamma(double(k)));
    out.upper_shape.envelope_exponent = double(k - 1);
    out.upper_shape.symbolic_prefactor =
        "zeta_Lambda(" + std::to_string(n_r) + ") * [Lambda^* : O_K^*]";

    // the empirical prefactor uses whichever sampled radii fit the
    // enumeration budget; NaN when none do
    MatrixLattice L = order_lattice(A);
    const double m = 2.0 * n_r;
    double sup = 0;
    int sampled = 0;
    for (double frac : {0.25, 0.5, 0.75, 1.0}) {
        double r = M * frac;
        if (r < e) continue;
        try {
            DetSumResult s = inverse_det_sum(L, r, m, opt);
            sup = std::max(sup, s.value / std::pow(std::log(r), double(k - 1)));
            ++sampled;
        } catch (const BudgetError&) {
        }
    }
    out.upper_shape.c_emp = sampled ? sup : std::numeric_limits<double>::quiet_NaN();
    return out;
}

}  // namespace idsum
