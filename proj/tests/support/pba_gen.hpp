#pragma once

// Test-side construction of small partial Boolean algebras: powerset cliques
// pasted along {bot, top}, optionally also along one complementary pair of
// the first clique.

#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctx/pba.hpp"

namespace pba_gen {

using ctx::FinitePartialBooleanAlgebra;

inline FinitePartialBooleanAlgebra glued_powersets(const std::vector<int>& atom_counts,
                                                   const std::vector<bool>& share_with_first) {
    const std::size_t cliques = atom_counts.size();
    const bool any_share =
        std::find(share_with_first.begin(), share_with_first.end(), true) !=
        share_with_first.end();

    // Atom names per clique; a shared pair is the first clique's first atom
    // "s" together with the co-atom "cos".
    std::vector<std::vector<std::string>> atoms(cliques);
    for (std::size_t c = 0; c < cliques; ++c) {
        for (int a = 0; a < atom_counts[c]; ++a) {
            if (a == 0 && ((c == 0 && any_share) || (c > 0 && share_with_first[c]))) {
                if (atom_counts[c] < 2) {
                    throw std::logic_error("sharing needs at least two atoms per clique");
                }
                atoms[c].push_back("s");
            } else {
                atoms[c].push_back("c" + std::to_string(c) + "a" + std::to_string(a));
            }
        }
    }

    const auto subset_name = [&](const std::vector<std::string>& clique_atoms,
                                 unsigned mask) -> std::string {
        const unsigned full = (1u << clique_atoms.size()) - 1u;
        if (mask == 0) return "bot";
        if (mask == full) return "top";
        // the complement of a shared atom is the shared co-atom
        for (std::size_t a = 0; a < clique_atoms.size(); ++a) {
            if (clique_atoms[a] == "s" && mask == (full ^ (1u << a))) return "cos";
        }
        std::vector<std::string> parts;
        for (std::size_t a = 0; a < clique_atoms.size(); ++a) {
            if (mask & (1u << a)) parts.push_back(clique_atoms[a]);
        }
        std::sort(parts.begin(), parts.end());
        std::string out;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) out += "+";
            out += parts[i];
        }
        return out;
    };

    std::map<std::string, int> index;
    std::vector<std::string> elements;
    const auto intern = [&](const std::string& name) {
        const auto it = index.find(name);
        if (it != index.end()) return it->second;
        const int id = static_cast<int>(elements.size());
        index[name] = id;
        elements.push_back(name);
        return id;
    };
    intern("bot");
    intern("top");

    std::vector<std::vector<int>> members(cliques); // element ids per clique, by mask
    for (std::size_t c = 0; c < cliques; ++c) {
        const unsigned size = 1u << atoms[c].size();
        for (unsigned mask = 0; mask < size; ++mask) {
            members[c].push_back(intern(subset_name(atoms[c], mask)));
        }
    }

    const int n = static_cast<int>(elements.size());
    FinitePartialBooleanAlgebra pba;
    pba.elements = elements;
    pba.bottom = 0;
    pba.top = 1;
    pba.commensurable.assign(n, std::vector<bool>(n, false));
    pba.meet.assign(n, std::vector<int>(n, -1));
    pba.join.assign(n, std::vector<int>(n, -1));
    pba.neg.assign(n, -1);
    for (int i = 0; i < n; ++i) pba.commensurable[i][i] = true;

    for (std::size_t c = 0; c < cliques; ++c) {
        const unsigned size = 1u << atoms[c].size();
        const unsigned full = size - 1u;
        for (unsigned s = 0; s < size; ++s) {
            const int es = members[c][s];
            const int complement = members[c][full ^ s];
            if (pba.neg[es] != -1 && pba.neg[es] != complement) {
                throw std::logic_error("inconsistent complement while pasting");
            }
            pba.neg[es] = complement;
            for (unsigned t = 0; t < size; ++t) {
                const int et = members[c][t];
                pba.commensurable[es][et] = true;
                const int meet = members[c][s & t];
                const int join = members[c][s | t];
                if ((pba.meet[es][et] != -1 && pba.meet[es][et] != meet) ||
                    (pba.join[es][et] != -1 && pba.join[es][et] != join)) {
                    throw std::logic_error("inconsistent operations while pasting");
                }
                pba.meet[es][et] = meet;
                pba.join[es][et] = join;
            }
        }
    }
    return pba;
}

inline FinitePartialBooleanAlgebra random_pba(std::mt19937_64& rng) {
    const std::size_t cliques = 1 + rng() % 3;
    std::vector<int> atom_counts;
    for (std::size_t c = 0; c < cliques; ++c) {
        atom_counts.push_back(1 + static_cast<int>(rng() % 3));
    }
    std::vector<bool> share(cliques, false);
    for (std::size_t c = 1; c < cliques; ++c) {
        if (atom_counts[0] >= 2 && atom_counts[c] >= 2 && rng() % 2 == 0) share[c] = true;
    }
    return glued_powersets(atom_counts, share);
}

} // namespace pba_gen
