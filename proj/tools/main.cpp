#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bilform/analysis.hpp"
#include "bilform/io.hpp"
#include "bilform/nondeg.hpp"

using namespace bilform;

namespace {

enum Exit { kOk = 0, kUsage = 1, kMismatch = 2, kBudget = 3 };

struct Common {
    std::string file;
    std::optional<u64> field;
    bool json = false;
    u64 seed = kDefaultSeed;
};

void add_common(CLI::App* sub, Common& c, bool want_json = true) {
    sub->add_option("file", c.file, "Gram matrix file")->required();
    sub->add_option("--field", c.field, "reduce the entries mod this prime instead of the file's p");
    sub->add_option("--seed", c.seed, "seed for randomized internals");
    if (want_json) sub->add_flag("--json", c.json, "JSON report on stdout");
}

std::string matrix_rows(const Matrix& M) {
    std::string out;
    for (std::size_t r = 0; r < M.rows(); ++r) {
        out += "    [";
        for (std::size_t c = 0; c < M.cols(); ++c) out += (c ? " " : "") + std::to_string(M.at(r, c));
        out += "]\n";
    }
    return out;
}

int cmd_analyze(const Common& c) {
    InputFile in = read_input(c.file, c.field);
    AnalyzeOptions ao;
    ao.seed = c.seed;
    Report r = analyze(BilSpace(in.gram), ao);
    std::cout << (c.json ? render_json(r) + "\n" : render_text(r));
    return kOk;
}

int cmd_verify(const Common& c, unsigned threads, u64 budget) {
    InputFile in = read_input(c.file, c.field);
    BilSpace space(in.gram);
    AnalyzeOptions ao;
    ao.seed = c.seed;
    Report r = analyze(space, ao);
    VerifyOptions vo;
    vo.search.threads = threads;
    vo.search.node_budget = budget;
    vo.search.seed = c.seed;
    verify(r, space, ao, vo);
    std::cout << (c.json ? render_json(r) + "\n" : render_text(r));
    bool mismatch = r.oracle->verdict == "MISMATCH", over = r.oracle->verdict == "BUDGET";
    for (const auto& l : r.layers) {
        mismatch = mismatch || l.verdict == "MISMATCH";
        over = over || l.verdict == "BUDGET";
    }
    if (mismatch) return kMismatch;
    return over ? kBudget : kOk;
}

int cmd_generators(const Common& c) {
    InputFile in = read_input(c.file, c.field);
    AdaptedBasis b = gabriel_basis(BilSpace(in.gram), c.seed);
    auto gens = all_generators(b);
    if (c.json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& g : gens) {
            nlohmann::json rows = nlohmann::json::array();
            for (std::size_t r = 0; r < g.g.rows(); ++r) rows.push_back(g.g.row(r));
            arr.push_back({{"family", family_name(g.label.family)}, {"label", g.label.to_string()}, {"matrix", rows}});
        }
        std::cout << nlohmann::json{{"field", in.p}, {"dim", in.n}, {"generators", arr}}.dump(2) << "\n";
        return kOk;
    }
    for (const auto& g : gens) std::cout << g.label.to_string() << "\n" << matrix_rows(g.g);
    return kOk;
}

int cmd_reduce(const Common& c) {
    InputFile in = read_input(c.file, c.field);
    BilSpace red = reduce_step(BilSpace(in.gram));
    std::cout << "# L^2(V)/L^1(V): " << red.towers().signature.to_string() << "\n" << format_input(red.gram());
    return kOk;
}

int cmd_canonical(const std::string& block, std::size_t n, std::optional<i64> lambda, u64 p) {
    if (!is_prime(p)) fail(Errc::BadPrime, std::to_string(p) + " is not prime");
    PrimeField F(p);
    BlockKind kind;
    if (block == "H")
        kind = BlockKind::H;
    else if (block == "Gamma")
        kind = BlockKind::Gamma;
    else
        kind = BlockKind::J;
    std::optional<u32> lam;
    if (lambda) lam = F.reduce(*lambda);
    std::cout << format_input(canonical_block(F, kind, n, lam));
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Isometry groups of bilinear forms over prime fields"};
    app.require_subcommand(1);
    Common c;
    unsigned threads = 1;
    u64 budget = kDefaultNodeBudget;
    std::string block;
    std::size_t n = 0;
    std::optional<i64> lambda;
    u64 canon_field = 0;

    auto* an = app.add_subcommand("analyze", "signature, towers, structure dimensions and predicted order");
    add_common(an, c);
    auto* ve = app.add_subcommand("verify", "analyze, then count isometries with the oracle and compare");
    add_common(ve, c);
    ve->add_option("--threads", threads, "oracle workers")->check(CLI::Range(1u, 256u));
    ve->add_option("--budget", budget, "oracle node budget");
    auto* ge = app.add_subcommand("generators", "labeled generators: X, torus, E, B basis, K-lifts");
    add_common(ge, c);
    auto* re = app.add_subcommand("reduce", "Gram of the form induced on L^2(V)/L^1(V)");
    add_common(re, c, false);
    auto* ca = app.add_subcommand("canonical", "emit H_n(lambda), Gamma_n or J_n(0) as an input file");
    ca->add_option("--block", block, "H, Gamma or J")->required()->check(CLI::IsMember({"H", "Gamma", "J"}));
    ca->add_option("--n", n, "size")->required();
    ca->add_option("--lambda", lambda, "eigenvalue parameter of H");
    ca->add_option("--field", canon_field, "prime")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }
    try {
        if (*an) return cmd_analyze(c);
        if (*ve) return cmd_verify(c, threads, budget);
        if (*ge) return cmd_generators(c);
        if (*re) return cmd_reduce(c);
        return cmd_canonical(block, n, lambda, canon_field);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == Errc::BudgetExceeded ? kBudget : kUsage;
    }
}
