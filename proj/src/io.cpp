#include "bilform/io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace bilform {

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& msg) {
    fail(Errc::ParseError, "line " + std::to_string(line) + ": " + msg);
}

bool is_integer(const std::string& t) {
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
        if (t[i] < '0' || t[i] > '9') return false;
    return true;
}

// arbitrary-length decimal reduced mod p
u32 reduce_decimal(const std::string& t, const PrimeField& F) {
    const bool neg = t[0] == '-';
    u64 r = 0;
    for (char c : t) {
        if (c < '0' || c > '9') continue;
        r = (r * 10 + static_cast<u64>(c - '0')) % F.p();
    }
    return neg ? F.neg(static_cast<u32>(r)) : static_cast<u32>(r);
}

u64 parse_count(const std::string& t, std::size_t line, const char* what) {
    if (!is_integer(t) || t[0] == '-' || t.size() > 12) parse_error(line, std::string("bad ") + what + " '" + t + "'");
    return std::stoull(t);
}

}  // namespace

InputFile parse_input(const std::string& text, std::optional<u64> field) {
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> lines;
    while (std::getline(in, raw)) {
        ++lineno;
        std::istringstream ls(raw);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty() || tok[0][0] == '#') continue;
        lines.emplace_back(lineno, std::move(tok));
    }
    if (lines.size() < 2) fail(Errc::ParseError, "expected 'p <prime>' and 'n <dim>' header lines");
    auto header = [&](std::size_t k, const char* key) {
        const auto& [ln, tok] = lines[k];
        if (tok.size() != 2 || tok[0] != key) parse_error(ln, std::string("expected '") + key + " <value>'");
        return parse_count(tok[1], ln, key);
    };
    const u64 p = header(0, "p");
    const u64 n = header(1, "n");
    const u64 modulus = field.value_or(p);
    if (modulus < 2 || modulus > 0xffffffffULL || !is_prime(modulus)) fail(Errc::BadPrime, std::to_string(modulus) + " is not a prime below 2^32");
    if (n > 4096) parse_error(lines[1].first, "dimension too large");
    if (lines.size() != 2 + n) fail(Errc::ParseError, "expected " + std::to_string(n) + " rows, found " + std::to_string(lines.size() - 2));
    PrimeField F(modulus);
    InputFile f{modulus, n, Matrix(F, n, n)};
    for (std::size_t r = 0; r < n; ++r) {
        const auto& [ln, tok] = lines[2 + r];
        if (tok.size() != n) parse_error(ln, "expected " + std::to_string(n) + " entries, found " + std::to_string(tok.size()));
        for (std::size_t c = 0; c < n; ++c) {
            if (!is_integer(tok[c])) parse_error(ln, "bad entry '" + tok[c] + "'");
            f.gram.at(r, c) = reduce_decimal(tok[c], F);
        }
    }
    return f;
}

InputFile read_input(const std::string& path, std::optional<u64> field) {
    std::ifstream in(path);
    if (!in) fail(Errc::ParseError, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_input(ss.str(), field);
}

std::string format_input(const Matrix& A) {
    std::ostringstream os;
    os << "p " << A.field().p() << "\nn " << A.rows() << "\n";
    for (std::size_t r = 0; r < A.rows(); ++r) {
        for (std::size_t c = 0; c < A.cols(); ++c) os << (c ? " " : "") << A.at(r, c);
        os << "\n";
    }
    return os.str();
}

}  // namespace bilform
