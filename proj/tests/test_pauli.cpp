#include <map>
#include <sstream>

#include "catch_amalgamated.hpp"
#include "huckelvq/molgraph.hpp"
#include "huckelvq/pauli.hpp"

using namespace huckelvq;

namespace {

HuckelMatrix padded_connectivity(const std::string& name) {
    auto m = lookup_molecule(name);
    REQUIRE(m.has_value());
    return pad_to_qubits(build_huckel(*m));
}

std::map<std::string, double> as_map(const PauliSum& s) {
    std::map<std::string, double> out;
    for (const PauliTerm& t : s.terms) out[t.string] = t.coeff;
    return out;
}

void check_exact_sum(const PauliSum& got, const std::map<std::string, double>& expect,
                     double tol = 1e-10) {
    auto gm = as_map(got);
    for (const auto& [str, coeff] : expect) {
        INFO("expected term " << str);
        REQUIRE(gm.count(str) == 1);
        CHECK(gm[str] == Catch::Approx(coeff).margin(tol));
    }
    for (const auto& [str, coeff] : gm) {
        INFO("unexpected term " << str << " = " << coeff);
        CHECK(expect.count(str) == 1);
    }
}

Matrix random_symmetric(std::size_t dim, Rng& rng) {
    Matrix A(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i; j < dim; ++j) A(i, j) = A(j, i) = rng.uniform(-1.0, 1.0);
    return A;
}

HuckelMatrix wrap(const Matrix& A) {
    HuckelMatrix H;
    H.entries = A;
    H.n_real = A.size();
    H.padded = true;
    return H;
}

}  // namespace

TEST_CASE("string_matrix: X, IX, YY") {
    const CMatrix X = string_matrix(PauliString("X"));
    CHECK(X(0, 1) == cplx(1, 0));
    CHECK(X(1, 0) == cplx(1, 0));
    CHECK(X(0, 0) == cplx(0, 0));

    const CMatrix IX = string_matrix(PauliString("IX"));
    CHECK(IX(0, 1) == cplx(1, 0));
    CHECK(IX(1, 0) == cplx(1, 0));
    CHECK(IX(2, 3) == cplx(1, 0));
    CHECK(IX(3, 2) == cplx(1, 0));
    CHECK(IX(0, 2) == cplx(0, 0));

    const CMatrix YY = string_matrix(PauliString("YY"));
    CHECK(YY(0, 3) == cplx(-1, 0));
    CHECK(YY(1, 2) == cplx(1, 0));
    CHECK(YY(2, 1) == cplx(1, 0));
    CHECK(YY(3, 0) == cplx(-1, 0));
}

TEST_CASE("string_matrix: Hermitian, involutory, traceless unless identity") {
    for (const char* s : {"I", "X", "Y", "Z", "XY", "ZZ", "YXZ"}) {
        const CMatrix M = string_matrix(PauliString(s));
        const std::size_t dim = M.size();
        cplx trace = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            trace += M(i, i);
            for (std::size_t j = 0; j < dim; ++j)
                CHECK(M(i, j) == std::conj(M(j, i)));
        }
        const bool identity = std::string(s).find_first_not_of('I') == std::string::npos;
        CHECK(std::abs(trace - (identity ? cplx(double(dim), 0) : cplx(0, 0))) < 1e-12);
    }
}

TEST_CASE("PauliString rejects bad letters") {
    CHECK_THROWS_AS(PauliString(""), std::invalid_argument);
    CHECK_THROWS_AS(PauliString("XA"), std::invalid_argument);
}

TEST_CASE("frobenius_decompose reproduces every published operator table row") {
    check_exact_sum(frobenius_decompose(padded_connectivity("C2H4")), {{"X", 1.0}});

    check_exact_sum(frobenius_decompose(padded_connectivity("C3H4")),
                    {{"IX", 0.5}, {"XI", 0.5}, {"XX", 0.5}, {"XZ", 0.5}, {"YY", 0.5},
                     {"ZX", 0.5}});

    check_exact_sum(frobenius_decompose(padded_connectivity("C4H4")),
                    {{"IX", 1.0}, {"XX", 1.0}});

    check_exact_sum(frobenius_decompose(padded_connectivity("C4H6")),
                    {{"IX", 1.0}, {"XX", 0.5}, {"YY", 0.5}});

    check_exact_sum(frobenius_decompose(padded_connectivity("C3H4O")),
                    {{"II", 0.25}, {"IX", 1.1}, {"IZ", -0.25}, {"XX", 0.45}, {"YY", 0.45},
                     {"ZI", -0.25}, {"ZZ", 0.25}});

    check_exact_sum(
        frobenius_decompose(padded_connectivity("C4H4O")),
        {{"III", 0.25},  {"IIX", 0.425}, {"IIZ", 0.25},   {"IXX", 0.275}, {"IYY", 0.275},
         {"IZI", 0.25},  {"IZZ", 0.25},  {"IZX", -0.025}, {"XII", 0.20},  {"XIZ", 0.20},
         {"XXX", 0.275}, {"XYY", -0.275}, {"XZI", 0.20},  {"XZZ", 0.20},  {"YXY", 0.275},
         {"YYX", 0.275}, {"ZII", 0.25},  {"ZIX", 0.425},  {"ZIZ", 0.25},  {"ZXX", 0.275},
         {"ZYY", 0.275}, {"ZZI", 0.25},  {"ZZX", -0.025}, {"ZZZ", 0.25}});

    check_exact_sum(
        frobenius_decompose(padded_connectivity("C6H6")),
        {{"IIX", 0.75},  {"IXX", 0.25},  {"IYY", 0.25}, {"IZX", 0.25}, {"XIX", 0.25},
         {"XXX", 0.25},  {"XYY", -0.25}, {"XZX", 0.25}, {"YIY", -0.25}, {"YXY", 0.25},
         {"YYX", 0.25},  {"YZY", -0.25}, {"ZIX", 0.25}, {"ZXX", 0.25}, {"ZYY", 0.25},
         {"ZZX", -0.25}});

    check_exact_sum(frobenius_decompose(padded_connectivity("C8H10")),
                    {{"IIX", 1.0}, {"IXX", 0.5}, {"IYY", 0.5}, {"XXX", 0.25},
                     {"XYY", -0.25}, {"YXY", 0.25}, {"YYX", 0.25}});
}

TEST_CASE("frobenius_decompose: terms in lexicographic order, zero matrix empty") {
    const PauliSum s = frobenius_decompose(padded_connectivity("C6H6"));
    for (std::size_t i = 1; i < s.terms.size(); ++i)
        CHECK(s.terms[i - 1].string < s.terms[i].string);

    HuckelMatrix Z = wrap(Matrix(4));
    CHECK(frobenius_decompose(Z).terms.empty());
}

TEST_CASE("frobenius_decompose: C60 encodes into exactly 680 strings on 6 qubits") {
    const PauliSum s = frobenius_decompose(padded_connectivity("C60"));
    CHECK(s.n_qubits == 6);
    CHECK(s.terms.size() == 680);
}

TEST_CASE("frobenius_decompose rejects bad inputs") {
    Matrix A(3);
    CHECK_THROWS_AS(frobenius_decompose(wrap(A)), std::invalid_argument);

    Matrix B(4);
    B(0, 1) = 1.0;  // asymmetric
    CHECK_THROWS_AS(frobenius_decompose(wrap(B)), std::invalid_argument);
}

TEST_CASE("reconstruct: acrolein operator row returns the published matrix") {
    PauliSum s;
    s.n_qubits = 2;
    s.terms = {{0.25, "II"}, {1.1, "IX"}, {-0.25, "IZ"}, {0.45, "XX"},
               {0.45, "YY"}, {-0.25, "ZI"}, {0.25, "ZZ"}};
    const Matrix A = reconstruct(s);
    const double expected[4][4] = {{0, 1.1, 0, 0},
                                   {1.1, 0, 0.9, 0},
                                   {0, 0.9, 0, 1.1},
                                   {0, 0, 1.1, 1}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(A(i, j) == Catch::Approx(expected[i][j]).margin(1e-12));
}

TEST_CASE("reconstruct: empty sum is the zero matrix") {
    PauliSum s;
    s.n_qubits = 2;
    const Matrix A = reconstruct(s);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(A(i, j) == 0.0);
}

TEST_CASE("roundtrip: reconstruct(frobenius_decompose(H)) = H on random symmetric 8x8") {
    Rng rng = Rng::keyed(42);
    for (int trial = 0; trial < 25; ++trial) {
        const HuckelMatrix H = wrap(random_symmetric(8, rng));
        const Matrix back = reconstruct(frobenius_decompose(H));
        CHECK(back.max_abs_diff(H.entries) < 1e-10);
    }
}

TEST_CASE("linearity of the Frobenius projection") {
    Rng rng = Rng::keyed(7);
    const Matrix A = random_symmetric(4, rng);
    const Matrix B = random_symmetric(4, rng);
    const double a = 0.75, b = -1.25;
    const auto dec = [](const Matrix& M) { return as_map(frobenius_decompose(wrap(M))); };
    auto da = dec(A), db = dec(B), dc = dec(a * A + b * B);
    for (const auto& [str, coeff] : dc) {
        const double ca = da.count(str) ? da[str] : 0.0;
        const double cb = db.count(str) ? db[str] : 0.0;
        CHECK(coeff == Catch::Approx(a * ca + b * cb).margin(1e-10));
    }
}

TEST_CASE("sign duality: decompose(-H) negates every coefficient") {
    const HuckelMatrix H = padded_connectivity("C4H4O");
    const HuckelMatrix S = to_solver_sign(H);
    auto pos = as_map(frobenius_decompose(H));
    auto neg = as_map(frobenius_decompose(S));
    REQUIRE(pos.size() == neg.size());
    for (const auto& [str, coeff] : pos) {
        REQUIRE(neg.count(str) == 1);
        CHECK(neg[str] == Catch::Approx(-coeff).margin(1e-12));
    }
}

TEST_CASE("orthogonality: trace(P_p P_q) = 2^N delta_pq, exhaustive to N=3") {
    for (std::size_t n = 1; n <= 3; ++n) {
        const std::size_t count = std::size_t(1) << (2 * n);
        const std::size_t dim = std::size_t(1) << n;
        std::vector<PauliMask> masks(count);
        for (std::size_t i = 0; i < count; ++i)
            masks[i] = make_mask(1.0, detail::index_to_string(i, n));
        std::size_t violations = 0;
        for (std::size_t p = 0; p < count; ++p) {
            for (std::size_t q = 0; q < count; ++q) {
                // trace of P_p * P_q via the one-nonzero-per-column structure
                cplx tr = 0.0;
                for (std::size_t c = 0; c < dim; ++c) {
                    const std::size_t mid = c ^ masks[q].xmask;
                    if ((mid ^ masks[p].xmask) != c) continue;  // off-diagonal product
                    const double sq =
                        (std::popcount(std::uint64_t(mid) & masks[q].zmask) & 1) ? -1.0 : 1.0;
                    const double sp =
                        (std::popcount(std::uint64_t(c) & masks[p].zmask) & 1) ? -1.0 : 1.0;
                    tr += masks[p].phase * masks[q].phase * sp * sq;
                }
                const cplx want = (p == q) ? cplx(double(dim), 0) : cplx(0, 0);
                if (std::abs(tr - want) > 1e-12) ++violations;
            }
        }
        CHECK(violations == 0);
    }
}

TEST_CASE("fit_decompose matches the projection on the published examples") {
    check_exact_sum(fit_decompose(padded_connectivity("C2H4")), {{"X", 1.0}}, 1e-4);
    check_exact_sum(fit_decompose(padded_connectivity("C4H6")),
                    {{"IX", 1.0}, {"XX", 0.5}, {"YY", 0.5}}, 1e-4);
}

TEST_CASE("fit_decompose agrees with frobenius_decompose on random symmetric 4x4") {
    Rng rng = Rng::keyed(11);
    const HuckelMatrix H = wrap(random_symmetric(4, rng));
    auto fit = as_map(fit_decompose(H));
    auto frob = as_map(frobenius_decompose(H));
    for (const auto& [str, coeff] : frob) {
        REQUIRE(fit.count(str) == 1);
        CHECK(fit[str] == Catch::Approx(coeff).margin(1e-3));
    }
}

TEST_CASE("fit_decompose agrees with the projection for every N<=2 corpus system") {
    for (const char* name : {"C2H4", "C3H4", "C4H4", "C4H6", "C3H4O"}) {
        INFO("molecule " << name);
        const HuckelMatrix H = padded_connectivity(name);
        auto fit = as_map(fit_decompose(H));
        auto frob = as_map(frobenius_decompose(H));
        REQUIRE(fit.size() == frob.size());
        for (const auto& [str, coeff] : frob)
            CHECK(fit[str] == Catch::Approx(coeff).margin(1e-3));
    }
}

TEST_CASE("fit_decompose reports non-convergence with the final epsilon") {
    FitConfig cfg;
    cfg.max_iterations = 2;
    cfg.epsilon_target = 0.0;
    cfg.min_rel_improvement = 0.0;
    CHECK_THROWS_AS(fit_decompose(padded_connectivity("C4H6"), cfg), std::runtime_error);
}

TEST_CASE("pauli sum text roundtrip") {
    const PauliSum s = frobenius_decompose(padded_connectivity("C6H6"));
    std::istringstream in(to_text(s));
    const PauliSum back = parse_pauli_sum(in);
    REQUIRE(back.terms.size() == s.terms.size());
    CHECK(back.n_qubits == s.n_qubits);
    for (std::size_t i = 0; i < s.terms.size(); ++i) {
        CHECK(back.terms[i].string == s.terms[i].string);
        CHECK(back.terms[i].coeff == Catch::Approx(s.terms[i].coeff).margin(1e-9));
    }
}

TEST_CASE("parse_pauli_sum rejects malformed input") {
    std::istringstream bad1("1.0\n");
    CHECK_THROWS_AS(parse_pauli_sum(bad1), std::invalid_argument);
    std::istringstream bad2("1.0 X\n0.5 XX\n");
    CHECK_THROWS_AS(parse_pauli_sum(bad2), std::invalid_argument);
    std::istringstream bad3("abc X\n");
    CHECK_THROWS_AS(parse_pauli_sum(bad3), std::invalid_argument);
}
