#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ctx/quantum.hpp"
#include "ctx/scenario.hpp"

namespace ctx {

/// Brute-force validation and valuation search stay trustworthy at this size.
inline constexpr int pba_element_cap = 64;
inline constexpr std::size_t ks_vector_cap = 256;

/// Explicit operation tables over element indices.
struct FiniteBooleanAlgebra {
    std::vector<std::string> elements;
    int top = 0;
    int bottom = 0;
    std::vector<int> neg;
    std::vector<std::vector<int>> meet;
    std::vector<std::vector<int>> join;

    int size() const { return static_cast<int>(elements.size()); }
    bool leq(int a, int b) const { return meet[a][b] == a; }
    std::vector<int> atoms() const;
};

/// Exhaustive check of the lattice, distributivity, complement and bound
/// laws plus the power-of-two element count. Throws SizeLimitError above
/// pba_element_cap elements.
std::vector<Violation> validate_algebra(const FiniteBooleanAlgebra& algebra);

/// All subsets of an n-element set. The contract allows n up to 16, but the
/// explicit tables grow as 4^n; n > 12 throws SizeLimitError.
FiniteBooleanAlgebra powerset_algebra(int n);

/// Total {0,1} assignment preserving the operations.
struct BooleanValuation {
    std::vector<int> values;

    bool operator==(const BooleanValuation& other) const = default;
    bool operator<(const BooleanValuation& other) const { return values < other.values; }
};

/// All homomorphisms to the two-element algebra; for a finite algebra these
/// biject with the atoms.
std::vector<BooleanValuation> stone_spectrum(const FiniteBooleanAlgebra& algebra);

/// The map a -> U_a = {w : w(a) = 1} onto the power set of the spectrum,
/// verified to be a bijective homomorphism (throws std::invalid_argument
/// otherwise, or on the trivial algebra).
struct StoneDuality {
    std::vector<BooleanValuation> spectrum;
    FiniteBooleanAlgebra clopen_algebra;
    /// image[a] = bitmask over spectrum points with w(a) = 1; doubles as the
    /// element index in clopen_algebra.
    std::vector<std::uint64_t> image;
};

StoneDuality stone_double_dual(const FiniteBooleanAlgebra& algebra);

/// Commensurability relation with partial meet/join (-1 where undefined)
/// and a total complement.
struct FinitePartialBooleanAlgebra {
    std::vector<std::string> elements;
    int top = 0;
    int bottom = 0;
    std::vector<std::vector<bool>> commensurable;
    std::vector<std::vector<int>> meet;
    std::vector<std::vector<int>> join;
    std::vector<int> neg;

    int size() const { return static_cast<int>(elements.size()); }
};

/// Maximal cliques of the commensurability graph, each sorted, the list
/// sorted lexicographically.
std::vector<std::vector<int>> maximal_cliques(const FinitePartialBooleanAlgebra& pba);

/// Restriction of the operations to a clique, remapped to local indices.
FiniteBooleanAlgebra clique_algebra(const FinitePartialBooleanAlgebra& pba,
                                    const std::vector<int>& clique);

/// Empty iff the commensurability axioms hold, the operations are defined
/// exactly on commensurable pairs, and every maximal clique carries a full
/// Boolean structure.
std::vector<Violation> validate_pba(const FinitePartialBooleanAlgebra& pba);

/// All {0,1} maps preserving top, bottom, complement everywhere and
/// meet/join on commensurable pairs, in lexicographic order.
/// Throws SizeLimitError above pba_element_cap elements.
std::vector<std::vector<int>> pba_valuations(const FinitePartialBooleanAlgebra& pba);

/// {0,1} values on the elements of one maximal clique.
struct PartialValuation {
    std::map<int, int> values;
};

/// Unique common extension of locals that agree on every overlap.
/// Throws GluingError on a clash, std::invalid_argument when the locals do
/// not cover all maximal cliques or one is not a valuation on its clique.
std::vector<int> glue_valuations(const FinitePartialBooleanAlgebra& pba,
                                 const std::map<std::vector<int>, PartialValuation>& locals);

/// Unit vectors plus the maximal mutually-orthogonal contexts they span.
struct VectorConfiguration {
    int dimension = 3;
    std::vector<CVector> vectors;
    std::vector<std::vector<int>> contexts;
};

/// Normalizes the vectors, rejects duplicates up to phase, and computes the
/// contexts (orthogonality within tol::orth).
VectorConfiguration make_configuration(int dimension, std::vector<CVector> vectors);

struct ConfigurationPba {
    FinitePartialBooleanAlgebra pba;
    /// Element index of the rank-1 projector of each input vector.
    std::vector<int> vector_elements;
};

/// Projector algebra generated by the configuration: bottom, top, the rank-1
/// projectors, context-local sums, plus meets/joins/complements of
/// commensurable pairs up to closure. Throws SizeLimitError above
/// `element_cap` elements.
ConfigurationPba configuration_to_pba(const VectorConfiguration& configuration,
                                      int element_cap = pba_element_cap);

struct KsColoring {
    bool colorable = false;
    /// One {0,1} value per input vector when colorable.
    std::vector<int> coloring;
};

/// Backtracking search for a {0,1} assignment with exactly one 1 in every
/// size-3 context and no two orthogonal vectors both 1. Dimension must be 3.
KsColoring ks_colorable(const VectorConfiguration& configuration,
                        std::size_t vector_cap = ks_vector_cap);

} // namespace ctx
