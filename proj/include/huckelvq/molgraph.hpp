#pragma once

// Hueckel matrices from molecular connectivity.
//
// A conjugated system is described by its labeled graph: atoms carry a
// Coulomb correction h (diagonal, in units of beta) and bonds a resonance
// multiplier k.  Energies are reported relative to alpha in units of beta,
// so the matrix holds only the h/k part.
//
// Two sign modes exist.  `connectivity` is the matrix whose Pauli
// decomposition matches the operator tables; `solver` is its negation, so
// that ascending eigenvalues match the conventional orbital-energy ordering.

#include <algorithm>
#include <istream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "huckelvq/core.hpp"

namespace huckelvq {

struct Atom {
    int id = 0;
    double h = 0.0;
};

struct Bond {
    int i = 0;
    int j = 0;
    double k = 1.0;
};

struct MoleculeSpec {
    std::string name;
    std::vector<Atom> atoms;
    std::vector<Bond> bonds;

    std::size_t size() const { return atoms.size(); }

    // Throws std::invalid_argument naming the offending entry.
    void validate() const {
        if (atoms.empty())
            throw std::invalid_argument("molecule '" + name + "': no atoms");
        std::vector<bool> seen(atoms.size(), false);
        for (const Atom& a : atoms) {
            if (a.id < 0 || std::size_t(a.id) >= atoms.size() || seen[a.id])
                throw std::invalid_argument("molecule '" + name +
                                            "': atom ids must be 0..M-1 without gaps "
                                            "(offending atom id " +
                                            std::to_string(a.id) + ")");
            seen[a.id] = true;
        }
        std::set<std::pair<int, int>> pairs;
        for (const Bond& b : bonds) {
            if (b.i == b.j)
                throw std::invalid_argument("molecule '" + name + "': self-bond on atom " +
                                            std::to_string(b.i));
            if (b.i < 0 || std::size_t(b.i) >= atoms.size() || b.j < 0 ||
                std::size_t(b.j) >= atoms.size())
                throw std::invalid_argument("molecule '" + name + "': bond (" +
                                            std::to_string(b.i) + "," + std::to_string(b.j) +
                                            ") references unknown atom id");
            if (b.k <= 0.0)
                throw std::invalid_argument("molecule '" + name + "': bond (" +
                                            std::to_string(b.i) + "," + std::to_string(b.j) +
                                            ") has non-positive k");
            auto key = std::minmax(b.i, b.j);
            if (!pairs.insert(key).second)
                throw std::invalid_argument("molecule '" + name + "': duplicate bond (" +
                                            std::to_string(b.i) + "," + std::to_string(b.j) +
                                            ")");
        }
    }
};

enum class SignMode { connectivity, solver };

struct HuckelMatrix {
    Matrix entries;
    std::size_t n_real = 0;                   // number of conjugated centers M
    std::vector<std::size_t> dummy_indices;   // padded rows/columns, M..2^N-1
    SignMode sign_mode = SignMode::connectivity;
    bool padded = false;

    std::size_t dim() const { return entries.size(); }

    std::size_t n_qubits() const {
        if (!padded) throw std::logic_error("n_qubits: matrix not padded");
        return log2_exact(dim());
    }
};

inline HuckelMatrix build_huckel(const MoleculeSpec& spec) {
    spec.validate();
    HuckelMatrix H;
    H.n_real = spec.size();
    H.entries = Matrix(spec.size());
    for (const Atom& a : spec.atoms) H.entries(a.id, a.id) = a.h;
    for (const Bond& b : spec.bonds) {
        H.entries(b.i, b.j) = b.k;
        H.entries(b.j, b.i) = b.k;
    }
    return H;
}

// Appends zero rows/columns until the dimension is a power of two (minimum 2,
// i.e. one qubit).  The appended indices are recorded as dummies.
inline HuckelMatrix pad_to_qubits(const HuckelMatrix& H) {
    if (H.padded) throw std::logic_error("pad_to_qubits: already padded");
    std::size_t dim = 2;
    while (dim < H.n_real) dim *= 2;
    HuckelMatrix P;
    P.n_real = H.n_real;
    P.sign_mode = H.sign_mode;
    P.padded = true;
    P.entries = Matrix(dim);
    for (std::size_t i = 0; i < H.dim(); ++i)
        for (std::size_t j = 0; j < H.dim(); ++j) P.entries(i, j) = H.entries(i, j);
    for (std::size_t i = H.n_real; i < dim; ++i) P.dummy_indices.push_back(i);
    return P;
}

inline HuckelMatrix to_solver_sign(const HuckelMatrix& H) {
    if (H.sign_mode != SignMode::connectivity)
        throw std::logic_error("to_solver_sign: matrix already in solver sign mode");
    HuckelMatrix S = H;
    S.entries = -1.0 * H.entries;
    S.sign_mode = SignMode::solver;
    return S;
}

namespace detail {

inline MoleculeSpec chain(std::string name, int n) {
    MoleculeSpec m;
    m.name = std::move(name);
    for (int i = 0; i < n; ++i) m.atoms.push_back({i, 0.0});
    for (int i = 0; i + 1 < n; ++i) m.bonds.push_back({i, i + 1, 1.0});
    return m;
}

inline MoleculeSpec cycle(std::string name, int n) {
    MoleculeSpec m = chain(std::move(name), n);
    m.bonds.push_back({n - 1, 0, 1.0});
    return m;
}

inline MoleculeSpec acrolein() {
    // C3H4O chain C=C-C=O; oxygen last with h = 1, bond k = 1.1, 0.9, 1.1.
    MoleculeSpec m;
    m.name = "C3H4O";
    m.atoms = {{0, 0.0}, {1, 0.0}, {2, 0.0}, {3, 1.0}};
    m.bonds = {{0, 1, 1.1}, {1, 2, 0.9}, {2, 3, 1.1}};
    return m;
}

inline MoleculeSpec furan() {
    // C4H4O five-membered ring, oxygen at index 0.  The h/k values are the
    // ones consistent with the published qubit operator for this system:
    // h_O = 2, k(C-O) = 0.8, k(C=C) = 1.1, k(C-C) = 0.9.
    MoleculeSpec m;
    m.name = "C4H4O";
    m.atoms = {{0, 2.0}, {1, 0.0}, {2, 0.0}, {3, 0.0}, {4, 0.0}};
    m.bonds = {{0, 1, 0.8}, {1, 2, 1.1}, {2, 3, 0.9}, {3, 4, 1.1}, {0, 4, 0.8}};
    return m;
}

inline MoleculeSpec pyrene() {
    // 2x2 compact benzenoid; 16 carbons, 19 bonds, vertices numbered row by
    // row top to bottom.
    static constexpr int bonds[19][2] = {
        {0, 2},  {0, 3},  {1, 3},  {1, 4},  {2, 5},   {3, 6},   {4, 7},
        {5, 8},  {5, 9},  {6, 9},  {6, 10}, {7, 10},  {8, 11},  {9, 12},
        {10, 13}, {11, 14}, {12, 14}, {12, 15}, {13, 15}};
    MoleculeSpec m;
    m.name = "C16H10";
    for (int i = 0; i < 16; ++i) m.atoms.push_back({i, 0.0});
    for (const auto& b : bonds) m.bonds.push_back({b[0], b[1], 1.0});
    return m;
}

// Canonical bond table of the truncated icosahedron (buckminsterfullerene
// graph): 60 vertices, 90 edges, 12 pentagonal and 20 hexagonal faces.  The
// vertex numbering is fixed; it follows a Hamiltonian-cycle walk of the cage
// and pins down the Pauli census of the encoded operator (680 strings).
inline constexpr int kC60Bonds[90][2] = {
    {0, 1},   {0, 3},   {0, 59},  {1, 2},   {1, 49},  {2, 4},   {2, 46},  {3, 4},
    {3, 5},   {4, 43},  {5, 6},   {5, 41},  {6, 7},   {6, 58},  {7, 8},   {7, 40},
    {8, 9},   {8, 56},  {9, 10},  {9, 38},  {10, 11}, {10, 55}, {11, 12}, {11, 15},
    {12, 13}, {12, 37}, {13, 14}, {13, 30}, {14, 15}, {14, 23}, {15, 16}, {16, 17},
    {16, 54}, {17, 18}, {17, 22}, {18, 19}, {18, 53}, {19, 20}, {19, 50}, {20, 21},
    {20, 48}, {21, 22}, {21, 27}, {22, 23}, {23, 24}, {24, 27}, {24, 29}, {25, 26},
    {25, 28}, {25, 45}, {26, 27}, {26, 47}, {28, 29}, {28, 32}, {29, 30}, {30, 31},
    {31, 32}, {31, 36}, {32, 33}, {33, 34}, {33, 44}, {34, 35}, {34, 42}, {35, 36},
    {35, 39}, {36, 37}, {37, 38}, {38, 39}, {39, 40}, {40, 41}, {41, 42}, {42, 43},
    {43, 44}, {44, 45}, {45, 46}, {46, 47}, {47, 48}, {48, 49}, {49, 50}, {50, 51},
    {51, 52}, {51, 59}, {52, 53}, {52, 57}, {53, 54}, {54, 55}, {55, 56}, {56, 57},
    {57, 58}, {58, 59}};

}  // namespace detail

inline MoleculeSpec generate_c60() {
    MoleculeSpec m;
    m.name = "C60";
    for (int i = 0; i < 60; ++i) m.atoms.push_back({i, 0.0});
    for (const auto& b : detail::kC60Bonds) m.bonds.push_back({b[0], b[1], 1.0});
    return m;
}

inline std::vector<MoleculeSpec> builtin_corpus() {
    std::vector<MoleculeSpec> out;
    out.push_back(detail::chain("C2H4", 2));
    out.push_back(detail::cycle("C3H4", 3));
    out.push_back(detail::cycle("C4H4", 4));
    out.push_back(detail::chain("C4H6", 4));
    out.push_back(detail::acrolein());
    out.push_back(detail::furan());
    out.push_back(detail::cycle("C6H6", 6));
    out.push_back(detail::chain("C8H10", 8));
    out.push_back(detail::pyrene());
    out.push_back(generate_c60());
    return out;
}

inline std::optional<MoleculeSpec> lookup_molecule(std::string_view name) {
    for (MoleculeSpec& m : builtin_corpus())
        if (m.name == name) return std::move(m);
    return std::nullopt;
}

// Plain text molecule format, one directive per line, '#' starts a comment:
//   molecule <name>
//   atom <id> [h=<real>]
//   bond <i> <j> [k=<real>]
inline MoleculeSpec parse_molecule(std::istream& in) {
    MoleculeSpec m;
    std::string line;
    int lineno = 0;
    bool have_molecule = false;
    auto fail = [&](const std::string& msg) {
        throw std::invalid_argument("line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        if (word == "molecule") {
            if (!(ls >> m.name)) fail("expected: molecule <name>");
            have_molecule = true;
        } else if (word == "atom") {
            Atom a;
            if (!(ls >> a.id)) fail("expected: atom <id> [h=<real>]");
            std::string opt;
            if (ls >> opt) {
                if (opt.rfind("h=", 0) != 0) fail("unknown atom option '" + opt + "'");
                try {
                    a.h = std::stod(opt.substr(2));
                } catch (const std::exception&) {
                    fail("bad h value '" + opt.substr(2) + "'");
                }
            }
            m.atoms.push_back(a);
        } else if (word == "bond") {
            Bond b;
            if (!(ls >> b.i >> b.j)) fail("expected: bond <i> <j> [k=<real>]");
            std::string opt;
            if (ls >> opt) {
                if (opt.rfind("k=", 0) != 0) fail("unknown bond option '" + opt + "'");
                try {
                    b.k = std::stod(opt.substr(2));
                } catch (const std::exception&) {
                    fail("bad k value '" + opt.substr(2) + "'");
                }
            }
            m.bonds.push_back(b);
        } else {
            fail("unknown directive '" + word + "'");
        }
    }
    if (!have_molecule)
        throw std::invalid_argument("missing 'molecule <name>' directive");
    try {
        m.validate();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("molecule file: ") + e.what());
    }
    return m;
}

}  // namespace huckelvq
