#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bilform/analysis.hpp"
#include "bilform/io.hpp"

namespace py = pybind11;
using namespace bilform;

namespace {

using Rows = std::vector<std::vector<i64>>;

Matrix to_matrix(const Rows& rows, u64 p) {
    for (const auto& r : rows)
        if (r.size() != rows.size()) fail(Errc::ShapeMismatch, "Gram matrix must be square");
    return Matrix(PrimeField(p), rows);
}

Rows to_rows(const Matrix& M) {
    Rows out(M.rows(), std::vector<i64>(M.cols()));
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j) out[i][j] = M.at(i, j);
    return out;
}

py::object big(const BigInt& v) { return py::module_::import("builtins").attr("int")(to_string(v)); }

SearchOptions search_opts(u64 budget, unsigned threads) {
    SearchOptions o;
    o.node_budget = budget;
    o.threads = threads;
    return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Isometry groups of bilinear forms over prime fields";

    static py::exception<Error> exc(m, "BilformError");
    py::register_exception_translator([](std::exception_ptr ptr) {
        try {
            if (ptr) std::rethrow_exception(ptr);
        } catch (const Error& e) {
            py::object err = exc;
            py::object inst = err(e.what());
            inst.attr("code") = errc_name(e.code());
            PyErr_SetObject(exc.ptr(), inst.ptr());
        }
    });

    m.def(
        "report_json",
        [](const Rows& gram, u64 p, bool do_verify, u64 budget, unsigned threads) {
            BilSpace S(to_matrix(gram, p));
            py::gil_scoped_release nogil;
            Report r = analyze(S);
            if (do_verify) {
                VerifyOptions vo;
                vo.search = search_opts(budget, threads);
                verify(r, S, {}, vo);
            }
            return render_json(r);
        },
        py::arg("gram"), py::arg("p"), py::arg("verify") = false, py::arg("budget") = kDefaultNodeBudget, py::arg("threads") = 1);

    m.def(
        "count_isometries",
        [](const Rows& gram, u64 p, u64 budget, unsigned threads) {
            BilSpace S(to_matrix(gram, p));
            BigInt c;
            {
                py::gil_scoped_release nogil;
                c = count_isometries(S, {}, search_opts(budget, threads));
            }
            return big(c);
        },
        py::arg("gram"), py::arg("p"), py::arg("budget") = kDefaultNodeBudget, py::arg("threads") = 1);

    m.def(
        "predicted_order",
        [](const Rows& gram, u64 p) -> py::object {
            Report r = analyze(BilSpace(to_matrix(gram, p)));
            if (!r.predicted) return py::none();
            return big(r.predicted->value());
        },
        py::arg("gram"), py::arg("p"));

    m.def(
        "signature",
        [](const Rows& gram, u64 p) {
            BlockSignature s = block_signature(BilSpace(to_matrix(gram, p)));
            py::dict d;
            d["odd"] = s.odd;
            d["even"] = s.even;
            d["ndeg"] = s.ndeg;
            d["text"] = s.to_string();
            return d;
        },
        py::arg("gram"), py::arg("p"));

    m.def(
        "adapted_basis",
        [](const Rows& gram, u64 p) {
            AdaptedBasis b = gabriel_basis(BilSpace(to_matrix(gram, p)));
            return py::make_tuple(to_rows(b.P), to_rows(b.canonical));
        },
        py::arg("gram"), py::arg("p"), "columns of P and the canonical Gram P^T A P");

    m.def(
        "reduce", [](const Rows& gram, u64 p) { return to_rows(reduce_step(BilSpace(to_matrix(gram, p))).gram()); }, py::arg("gram"),
        py::arg("p"));

    m.def(
        "canonical_block",
        [](const std::string& kind, std::size_t n, u64 p, std::optional<i64> lambda) {
            PrimeField F(p);
            BlockKind k = BlockKind::J;
            if (kind == "H")
                k = BlockKind::H;
            else if (kind == "Gamma")
                k = BlockKind::Gamma;
            else if (kind != "J")
                fail(Errc::BadParams, "kind must be H, Gamma or J");
            std::optional<u32> l;
            if (lambda) l = F.reduce(*lambda);
            return to_rows(canonical_block(F, k, n, l));
        },
        py::arg("kind"), py::arg("n"), py::arg("p"), py::arg("lam") = py::none());

    m.def(
        "parse", [](const std::string& text, std::optional<u64> field) {
            InputFile f = parse_input(text, field);
            return py::make_tuple(f.p, to_rows(f.gram));
        },
        py::arg("text"), py::arg("field") = py::none());
}
