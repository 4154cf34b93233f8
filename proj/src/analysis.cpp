#include "bilform/analysis.hpp"

#include <random>
#include <sstream>

#include <json.hpp>

namespace bilform {

namespace {

std::vector<std::size_t> dims_of(const std::vector<Subspace>& v) {
    std::vector<std::size_t> out;
    for (const auto& s : v) out.push_back(s.dim());
    return out;
}

TowerDims tower_dims(const TowerData& T) {
    return {dims_of(T.L_odd), dims_of(T.R_odd), dims_of(T.L_even), dims_of(T.R_even), T.V_inf.dim(), T.up_inf.dim(),
            T.V_sup.dim(),    T.low_inf.dim(),  dims_of(T.Vi_chain)};
}

bool is_budget(const Error& e) { return e.code() == Errc::BudgetExceeded || e.code() == Errc::CapExceeded; }

// Orders of the non-degenerate part per primary component; Case IIb uses the oracle only when allowed.
NdegReport ndeg_analysis(const Matrix& N, const SearchOptions& so, bool oracle_for_IIb) {
    NdegReport r;
    r.dim = N.rows();
    if (r.dim == 0) {
        r.order = 1;
        return r;
    }
    BilSpace S(N);
    AsymmetryData asym = asymmetry(S);
    PMData pm = pm_data(S);
    r.min_poly = asym.min_poly;
    r.nondeg_plus = pm.nondeg_plus;
    r.nondeg_minus = pm.nondeg_minus;
    bool complete = true;
    BigInt total = 1;
    for (std::size_t idx = 0; idx < asym.components.size(); ++idx) {
        const AsymComponent& c = asym.components[idx];
        NdegComponentReport cr{c.p, c.exponent, c.V.dim(), c.kase, c.partner, c.representative, std::nullopt, ""};
        auto run_oracle = [&] {
            try {
                cr.order = count_isometries(BilSpace(restricted_gram(N, c.V)), {}, so);
                cr.source = "oracle";
            } catch (const Error& e) {
                if (!is_budget(e)) throw;
                cr.source = "requires --verify (oracle budget)";
            }
        };
        if (c.kase == RiehmCase::I_paired) {
            if (!c.representative) {
                cr.source = "counted with its partner";
                r.components.push_back(cr);
                continue;
            }
            CaseIResult ci = case_I_reduction(asym, idx);
            if (ci.predicted_order) {
                cr.order = *ci.predicted_order;
                cr.source = "centralizer";
            } else {
                cr.source = "requires --verify (commutation system of dimension " + std::to_string(ci.system_dim) + ")";
            }
        } else if (c.kase == RiehmCase::IIa || oracle_for_IIb) {
            run_oracle();
        } else {
            cr.source = "requires --verify (Case IIb, open)";
        }
        if (cr.order)
            total *= *cr.order;
        else
            complete = false;
        r.components.push_back(cr);
    }
    if (complete) r.order = total;
    return r;
}

void set_prediction(Report& r) {
    if (!r.ndeg.order) {
        r.predicted.reset();
        return;
    }
    GroupOrder nd(r.p);
    nd.mul_cofactor(*r.ndeg.order);
    r.predicted = order_formula(r.structure, r.p, r.even_order, nd);
}

LayerCheck count_layer(const std::string& name, const BigInt& expected, const BilSpace& space, const ConstraintSet& cs,
                       const SearchOptions& so) {
    LayerCheck lc{name, expected, std::nullopt, "", ""};
    try {
        lc.observed = count_isometries(space, cs, so);
        lc.verdict = *lc.observed == expected ? "MATCH" : "MISMATCH";
    } catch (const Error& e) {
        if (!is_budget(e)) throw;
        lc.verdict = "BUDGET";
        lc.note = e.what();
    }
    return lc;
}

LayerCheck closure_layer(const std::string& name, const BigInt& expected, const std::vector<LabeledGen>& gens, std::size_t cap) {
    LayerCheck lc{name, expected, std::nullopt, "", ""};
    if (expected > cap) {
        lc.verdict = "SKIPPED";
        lc.note = "expected order above the closure cap";
        return lc;
    }
    std::vector<Matrix> g;
    for (const auto& x : gens) g.push_back(x.g);
    if (g.empty()) {
        lc.observed = 1;
    } else {
        lc.observed = group_closure(g, cap).order;
    }
    lc.verdict = *lc.observed == expected ? "MATCH" : "MISMATCH";
    return lc;
}

// Isometries of N against the centralizer predicates of the symmetric and alternating parts.
std::vector<std::string> predicate_checks(const Matrix& N, const SearchOptions& so, u64 seed) {
    std::vector<std::string> out;
    if (N.rows() == 0) return out;
    const PrimeField& F = N.field();
    BilSpace S(N);
    PMData pm = pm_data(S);
    std::vector<Matrix> iso;
    try {
        iso = enumerate_isometries(S, {}, 10'000, so);
    } catch (const Error& e) {
        if (!is_budget(e)) throw;
        out.push_back(std::string("isometry enumeration skipped: ") + e.what());
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<u32> d(0, F.p() - 1);
    std::vector<Matrix> samples;
    while (samples.size() < 200) {
        Matrix g(F, N.rows(), N.rows());
        for (std::size_t i = 0; i < g.rows(); ++i)
            for (std::size_t j = 0; j < g.cols(); ++j) g.at(i, j) = d(rng);
        if (rank(g) == g.rows()) samples.push_back(g);
    }
    for (Part part : {Part::plus, Part::minus}) {
        const bool ok = part == Part::plus ? pm.nondeg_plus : pm.nondeg_minus;
        if (!ok) continue;
        const char* name = part == Part::plus ? "phi+" : "phi-";
        std::size_t agree_iso = 0, agree_mixed = 0, agree_rand = 0;
        for (const auto& g : iso) {
            agree_iso += is_in_G(pm, g, part);
            agree_mixed += is_in_G_mixed(pm, g, part);
        }
        for (const auto& g : samples) agree_rand += is_in_G(pm, g, part) == is_isometry(N, g);
        std::ostringstream os;
        os << name << " centralizer predicate: " << agree_iso << '/' << iso.size() << " isometries, mixed form " << agree_mixed << '/'
           << iso.size() << ", " << agree_rand << '/' << samples.size() << " random samples agree";
        out.push_back(os.str());
    }
    return out;
}

}  // namespace

Matrix ndeg_gram(const AdaptedBasis& b) {
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < b.ndeg_dim; ++k) idx.push_back(b.ndeg_first + k);
    return b.canonical.submatrix(idx, idx);
}

std::vector<LabeledGen> all_generators(const AdaptedBasis& b) {
    std::vector<LabeledGen> out = x_generators(b);
    for (auto& g : torus_generators(b)) out.push_back(std::move(g));
    for (int i = 1; i <= b.signature.t; ++i)
        for (auto& g : e_generators(b, i)) out.push_back(std::move(g));
    int k = 0;
    for (auto& g : basis_of_B(b)) out.push_back({{GenLabel::Family::B_basis, 0, 0, 0, 0, k++, 0}, std::move(g)});
    k = 0;
    for (const auto& [Y1, Y2] : y_pairs_basis(b)) out.push_back({{GenLabel::Family::K_lift, 0, 0, 0, 0, k++, 0}, lift_pair(b, Y1, Y2)});
    return out;
}

std::string Report::order_text() const { return predicted ? predicted->factored() : "requires --verify"; }

Report analyze(const BilSpace& space, const AnalyzeOptions& opt) {
    Report r;
    r.p = space.field().p();
    r.n = space.dim();
    const TowerData& T = space.towers();
    r.signature = T.signature;
    r.towers = tower_dims(T);
    AdaptedBasis b = gabriel_basis(space, opt.seed);
    r.structure = dims_report(b, r.p);
    EvenCentralizer ec = even_centralizer_data(b, r.p);
    r.even_type = ec.type;
    r.even_order = ec.order;
    SearchOptions so;
    so.node_budget = opt.ndeg_budget;
    so.seed = opt.seed;
    r.ndeg = ndeg_analysis(ndeg_gram(b), so, false);
    set_prediction(r);
    return r;
}

void verify(Report& r, const BilSpace& space, const AnalyzeOptions& aopt, const VerifyOptions& opt) {
    AdaptedBasis b = gabriel_basis(space, aopt.seed);
    const Matrix N = ndeg_gram(b);
    if (!r.predicted) {
        r.ndeg = ndeg_analysis(N, opt.search, true);
        set_prediction(r);
    }
    OracleReport o;
    try {
        SearchResult sr = search_isometries(space, {}, opt.search);
        o.value = sr.count;
        o.nodes = sr.nodes;
        // a component counted by the oracle on the whole space makes the comparison circular
        bool circular = !r.predicted;
        for (const auto& c : r.ndeg.components)
            circular = circular || (c.source == "oracle" && c.dim == r.n);
        if (circular)
            o.verdict = "ORACLE-ONLY";
        else
            o.verdict = r.predicted->value() == sr.count ? "MATCH" : "MISMATCH";
    } catch (const Error& e) {
        if (!is_budget(e)) throw;
        o.verdict = "BUDGET";
        o.note = e.what();
    }
    r.oracle = o;

    r.layers.clear();
    const TowerData& T = space.towers();
    const BlockSignature& sig = r.signature;
    const u64 q = r.p;
    if (sig.t > 0 || !sig.even.empty()) {
        ConstraintSet k_cs;
        k_cs.fixed_pointwise = T.V_inf;
        k_cs.trivial_on_quotient = std::make_pair(T.up_inf, T.V_inf);
        r.layers.push_back(count_layer("K = q^dim_K", big_pow(q, r.structure.dim_K), space, k_cs, opt.search));
        if (r.ndeg.order) {
            ConstraintSet f_cs;
            f_cs.fixed_pointwise = T.V_inf;
            BigInt e = big_pow(q, r.structure.dim_K) * r.even_order.value() * *r.ndeg.order;
            r.layers.push_back(count_layer("G[V_inf] = q^dim_K * even * ndeg", e, space, f_cs, opt.search));
        }
        r.layers.push_back(closure_layer("<X> = q^dim_U", big_pow(q, r.structure.dim_U), x_generators(b), opt.closure_cap));
        for (int i = 1; i <= sig.t; ++i) {
            const u64 m = static_cast<u64>(sig.m[static_cast<std::size_t>(i - 1)]);
            r.layers.push_back(closure_layer("E_" + std::to_string(i) + " = |GL_" + std::to_string(m) + "|", GroupOrder::gl(q, m).value(),
                                             e_generators(b, i), opt.closure_cap));
        }
    }
    r.predicate_checks = predicate_checks(N, opt.search, aopt.seed);
}

std::string render_text(const Report& r) {
    std::ostringstream os;
    const auto& s = r.structure;
    os << "field        GF(" << r.p << ")\n";
    os << "dimension    " << r.n << "\n";
    os << "signature    " << r.signature.to_string() << "\n";
    if (r.signature.t > 0) {
        os << "             t = " << r.signature.t << ", tbar = " << r.signature.tbar << ", s =";
        for (int x : r.signature.s) os << ' ' << x;
        os << ", m =";
        for (int x : r.signature.m) os << ' ' << x;
        os << "\n";
    }
    auto list = [&](const std::vector<std::size_t>& v) {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + std::to_string(v[i]);
        return out;
    };
    os << "towers       dim L^1,L^3,..: " << list(r.towers.L_odd) << " | R^1,R^3,..: " << list(r.towers.R_odd) << "\n";
    os << "             dim L^0,L^2,..: " << list(r.towers.L_even) << " | R^0,R^2,..: " << list(r.towers.R_even) << "\n";
    os << "             V_inf " << r.towers.V_inf << ", up_inf " << r.towers.up_inf << ", V_sup " << r.towers.V_sup << ", low_inf "
       << r.towers.low_inf << ", V(i): " << list(r.towers.Vi) << "\n";
    os << "dims         U " << s.dim_U << ", K " << s.dim_K << ", B " << s.dim_B << ", K/B " << s.dim_K_mod_B << "\n";
    for (const auto& e : s.series) {
        os << "series       d_{" << e.j << ',' << 2 * e.k - 1 << "} = " << e.d << "  I = {";
        for (std::size_t i = 0; i < e.I.size(); ++i) os << (i ? "," : "") << e.I[i];
        os << "}\n";
    }
    if (!s.constituents.empty()) {
        os << "constituents";
        for (const auto& c : s.constituents) os << ' ' << c.kind << '^' << c.i << '_' << c.index << "(dim " << c.dim << ')';
        os << "\n";
    }
    os << "class        N/G[V_inf] " << s.class_N << ", K " << s.class_K << " (0 trivial, 1 abelian, 2 class two)\n";
    if (!r.even_type.parts.empty()) {
        os << "even part    centralizer type (";
        for (std::size_t i = 0; i < r.even_type.parts.size(); ++i) os << (i ? "," : "") << r.even_type.parts[i];
        os << "), order " << r.even_order.factored() << "\n";
    }
    if (r.ndeg.dim) {
        os << "ndeg part    dim " << r.ndeg.dim << ", p_sigma = " << r.ndeg.min_poly->to_string() << ", phi+ "
           << (r.ndeg.nondeg_plus ? "nondegenerate" : "degenerate") << ", phi- " << (r.ndeg.nondeg_minus ? "nondegenerate" : "degenerate")
           << "\n";
        for (std::size_t i = 0; i < r.ndeg.components.size(); ++i) {
            const auto& c = r.ndeg.components[i];
            os << "  [" << i << "] (" << c.p.to_string() << ")^" << c.exponent << "  dim " << c.dim << "  " << case_name(c.kase);
            if (c.partner) os << " with [" << *c.partner << "]";
            os << "  order " << (c.order ? to_string(*c.order) : "-") << " (" << c.source << ")\n";
        }
    }
    os << "order        " << r.order_text();
    if (r.predicted) os << " = " << to_string(r.predicted->value());
    os << "\n";
    if (r.oracle) {
        os << "oracle       " << (r.oracle->value ? to_string(*r.oracle->value) : "-") << "  " << r.oracle->verdict;
        if (!r.oracle->note.empty()) os << " (" << r.oracle->note << ")";
        os << "\n";
        for (const auto& l : r.layers) {
            os << "layer        " << l.name << ": expected " << to_string(l.expected) << ", observed "
               << (l.observed ? to_string(*l.observed) : "-") << "  " << l.verdict;
            if (!l.note.empty()) os << " (" << l.note << ")";
            os << "\n";
        }
        for (const auto& c : r.predicate_checks) os << "predicate    " << c << "\n";
    }
    return os.str();
}

std::string render_json(const Report& r, int indent) {
    using nlohmann::json;
    json j;
    j["field"] = r.p;
    j["dim"] = r.n;
    json odd = json::array(), even = json::array();
    for (auto it = r.signature.odd.rbegin(); it != r.signature.odd.rend(); ++it)
        odd.push_back({{"s", it->first}, {"size", 2 * it->first + 1}, {"mult", it->second}});
    for (auto it = r.signature.even.rbegin(); it != r.signature.even.rend(); ++it)
        even.push_back({{"s", it->first}, {"size", 2 * it->first}, {"mult", it->second}});
    j["signature"] = {{"odd", odd}, {"even", even}, {"ndeg", r.signature.ndeg}};
    j["dims"] = {{"U", r.structure.dim_U}, {"K", r.structure.dim_K}, {"B", r.structure.dim_B}};
    json series = json::array();
    for (const auto& e : r.structure.series) series.push_back({{"j", e.j}, {"k", e.k}, {"d", e.d}, {"I", e.I}});
    j["series"] = series;
    j["order"] = {{"factored", r.order_text()}, {"value", r.predicted ? json(to_string(r.predicted->value())) : json(nullptr)}};
    if (r.oracle)
        j["oracle"] = {{"value", r.oracle->value ? json(to_string(*r.oracle->value)) : json(nullptr)}, {"verdict", r.oracle->verdict}};
    else
        j["oracle"] = {{"value", nullptr}, {"verdict", nullptr}};

    j["towers"] = {{"L_odd", r.towers.L_odd}, {"R_odd", r.towers.R_odd}, {"L_even", r.towers.L_even}, {"R_even", r.towers.R_even},
                   {"V_inf", r.towers.V_inf}, {"up_inf", r.towers.up_inf}, {"V_sup", r.towers.V_sup}, {"low_inf", r.towers.low_inf},
                   {"Vi", r.towers.Vi}};
    j["structure"] = {{"K_mod_B", r.structure.dim_K_mod_B}, {"class_N", r.structure.class_N}, {"class_K", r.structure.class_K}};
    json cons = json::array();
    for (const auto& c : r.structure.constituents)
        cons.push_back({{"kind", std::string(1, c.kind)}, {"i", c.i}, {"index", c.index}, {"dim", c.dim}});
    j["constituents"] = cons;
    j["even"] = {{"type", r.even_type.parts}, {"order", to_string(r.even_order.value())}};
    json comps = json::array();
    for (const auto& c : r.ndeg.components) {
        comps.push_back({{"poly", c.p.to_string()},
                         {"exponent", c.exponent},
                         {"dim", c.dim},
                         {"case", case_name(c.kase)},
                         {"partner", c.partner ? json(*c.partner) : json(nullptr)},
                         {"order", c.order ? json(to_string(*c.order)) : json(nullptr)},
                         {"source", c.source}});
    }
    j["ndeg"] = {{"dim", r.ndeg.dim},
                 {"min_poly", r.ndeg.min_poly ? json(r.ndeg.min_poly->to_string()) : json(nullptr)},
                 {"phi_plus_nondegenerate", r.ndeg.nondeg_plus},
                 {"phi_minus_nondegenerate", r.ndeg.nondeg_minus},
                 {"components", comps},
                 {"order", r.ndeg.order ? json(to_string(*r.ndeg.order)) : json(nullptr)}};
    if (r.oracle) {
        j["oracle"]["nodes"] = r.oracle->nodes;
        if (!r.oracle->note.empty()) j["oracle"]["note"] = r.oracle->note;
        json layers = json::array();
        for (const auto& l : r.layers)
            layers.push_back({{"name", l.name},
                              {"expected", to_string(l.expected)},
                              {"observed", l.observed ? json(to_string(*l.observed)) : json(nullptr)},
                              {"verdict", l.verdict}});
        j["layers"] = layers;
        j["predicates"] = r.predicate_checks;
    }
    return j.dump(indent);
}

}  // namespace bilform
