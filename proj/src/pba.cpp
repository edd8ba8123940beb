#include "ctx/pba.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "ctx/errors.hpp"

namespace ctx {

namespace {

bool name_ok(const std::string& s) {
    return !s.empty() && s.find(',') == std::string::npos;
}

std::vector<int> sorted_intersection(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

/// Maximal cliques of an undirected graph, pivoted Bron-Kerbosch with a
/// deterministic visit order. Self-loops are ignored.
std::vector<std::vector<int>> all_maximal_cliques(const std::vector<std::vector<bool>>& adjacent) {
    const int n = static_cast<int>(adjacent.size());
    std::vector<std::vector<int>> neighbours(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j && adjacent[i][j]) neighbours[i].push_back(j);
        }
    }

    std::vector<std::vector<int>> out;
    std::function<void(std::vector<int>, std::vector<int>, std::vector<int>)> expand =
        [&](std::vector<int> r, std::vector<int> p, std::vector<int> x) {
            if (p.empty() && x.empty()) {
                out.push_back(std::move(r));
                return;
            }
            int pivot = -1;
            std::size_t best = 0;
            for (const auto& pool : {p, x}) {
                for (const int u : pool) {
                    const std::size_t score = sorted_intersection(p, neighbours[u]).size();
                    if (pivot < 0 || score > best) {
                        pivot = u;
                        best = score;
                    }
                }
            }
            std::vector<int> candidates;
            for (const int v : p) {
                if (!adjacent[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(v)] ||
                    pivot == v) {
                    candidates.push_back(v);
                }
            }
            for (const int v : candidates) {
                auto r2 = r;
                r2.push_back(v);
                expand(std::move(r2), sorted_intersection(p, neighbours[v]),
                       sorted_intersection(x, neighbours[v]));
                p.erase(std::remove(p.begin(), p.end(), v), p.end());
                x.insert(std::lower_bound(x.begin(), x.end(), v), v);
            }
        };

    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    expand({}, all, {});
    for (auto& clique : out) std::sort(clique.begin(), clique.end());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

std::vector<int> FiniteBooleanAlgebra::atoms() const {
    std::vector<int> out;
    for (int a = 0; a < size(); ++a) {
        if (a == bottom || (top == bottom)) continue;
        bool atom = a != bottom;
        for (int b = 0; b < size() && atom; ++b) {
            if (b == a || b == bottom) continue;
            if (leq(b, a)) atom = false;
        }
        if (atom) out.push_back(a);
    }
    return out;
}

std::vector<Violation> validate_algebra(const FiniteBooleanAlgebra& algebra) {
    std::vector<Violation> out;
    const int n = algebra.size();
    if (n == 0) {
        out.push_back({"elements", "empty algebra"});
        return out;
    }
    if (n > pba_element_cap) {
        throw SizeLimitError("validate_algebra supports at most " +
                             std::to_string(pba_element_cap) + " elements");
    }

    std::set<std::string> names;
    for (const auto& e : algebra.elements) {
        if (!name_ok(e)) out.push_back({"element '" + e + "'", "names must be non-empty and comma-free"});
        if (!names.insert(e).second) out.push_back({"element '" + e + "'", "duplicate name"});
    }
    auto in_range = [n](int v) { return v >= 0 && v < n; };
    bool structural = true;
    if (!in_range(algebra.top) || !in_range(algebra.bottom)) {
        out.push_back({"bounds", "top/bottom index out of range"});
        structural = false;
    }
    if (algebra.neg.size() != static_cast<std::size_t>(n) ||
        algebra.meet.size() != static_cast<std::size_t>(n) ||
        algebra.join.size() != static_cast<std::size_t>(n)) {
        out.push_back({"tables", "operation tables do not match the element count"});
        structural = false;
    } else {
        for (int a = 0; a < n && structural; ++a) {
            if (algebra.meet[a].size() != static_cast<std::size_t>(n) ||
                algebra.join[a].size() != static_cast<std::size_t>(n)) {
                out.push_back({"tables", "ragged operation table"});
                structural = false;
                break;
            }
            if (!in_range(algebra.neg[a])) {
                out.push_back({"neg", "value out of range"});
                structural = false;
            }
            for (int b = 0; b < n; ++b) {
                if (!in_range(algebra.meet[a][b]) || !in_range(algebra.join[a][b])) {
                    out.push_back({"tables", "operation value out of range"});
                    structural = false;
                    break;
                }
            }
        }
    }
    if (!structural) return out;

    const auto name = [&](int a) { return algebra.elements[static_cast<std::size_t>(a)]; };
    for (int a = 0; a < n; ++a) {
        if (algebra.meet[a][a] != a) out.push_back({name(a), "meet is not idempotent"});
        if (algebra.join[a][a] != a) out.push_back({name(a), "join is not idempotent"});
        for (int b = 0; b < n; ++b) {
            if (algebra.meet[a][b] != algebra.meet[b][a]) {
                out.push_back({name(a) + "," + name(b), "meet is not commutative"});
            }
            if (algebra.join[a][b] != algebra.join[b][a]) {
                out.push_back({name(a) + "," + name(b), "join is not commutative"});
            }
        }
    }
    if (!out.empty()) return out;

    const auto leq = [&](int a, int b) { return algebra.meet[a][b] == a; };
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            for (int c = 0; c < n; ++c) {
                if (leq(a, b) && leq(b, c) && !leq(a, c)) {
                    out.push_back({name(a) + "<=" + name(b) + "<=" + name(c),
                                   "order is not transitive"});
                }
            }
        }
    }
    for (int a = 0; a < n; ++a) {
        if (!leq(algebra.bottom, a)) out.push_back({name(a), "bottom is not below it"});
        if (!leq(a, algebra.top)) out.push_back({name(a), "top is not above it"});
        const int na = algebra.neg[a];
        if (algebra.meet[a][na] != algebra.bottom) {
            out.push_back({name(a), "a and not-a do not meet at bottom"});
        }
        if (algebra.join[a][na] != algebra.top) {
            out.push_back({name(a), "a and not-a do not join at top"});
        }
    }
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const int m = algebra.meet[a][b];
            if (!leq(m, a) || !leq(m, b)) {
                out.push_back({name(a) + "," + name(b), "meet is not a lower bound"});
            }
            const int j = algebra.join[a][b];
            if (!leq(a, j) || !leq(b, j)) {
                out.push_back({name(a) + "," + name(b), "join is not an upper bound"});
            }
            for (int c = 0; c < n; ++c) {
                if (leq(c, a) && leq(c, b) && !leq(c, m)) {
                    out.push_back({name(a) + "," + name(b),
                                   "meet is not the greatest lower bound (" + name(c) + ")"});
                }
                if (leq(a, c) && leq(b, c) && !leq(j, c)) {
                    out.push_back({name(a) + "," + name(b),
                                   "join is not the least upper bound (" + name(c) + ")"});
                }
                if (algebra.meet[a][algebra.join[b][c]] !=
                    algebra.join[algebra.meet[a][b]][algebra.meet[a][c]]) {
                    out.push_back({name(a) + "," + name(b) + "," + name(c),
                                   "distributive law fails"});
                }
            }
        }
    }
    if ((n & (n - 1)) != 0) {
        out.push_back({"elements", "element count " + std::to_string(n) +
                                       " is not a power of two"});
    }
    return out;
}

FiniteBooleanAlgebra powerset_algebra(int n) {
    if (n < 0 || n > 16) {
        throw std::invalid_argument("powerset_algebra expects 0 <= n <= 16");
    }
    if (n > 12) {
        throw SizeLimitError("powerset_algebra: explicit tables above n = 12 exceed memory");
    }
    const int size = 1 << n;
    FiniteBooleanAlgebra algebra;
    algebra.elements.reserve(static_cast<std::size_t>(size));
    for (int mask = 0; mask < size; ++mask) algebra.elements.push_back(std::to_string(mask));
    algebra.bottom = 0;
    algebra.top = size - 1;
    algebra.neg.resize(static_cast<std::size_t>(size));
    algebra.meet.assign(static_cast<std::size_t>(size), std::vector<int>(size, 0));
    algebra.join.assign(static_cast<std::size_t>(size), std::vector<int>(size, 0));
    const int full = size - 1;
    for (int a = 0; a < size; ++a) {
        algebra.neg[a] = full ^ a;
        for (int b = 0; b < size; ++b) {
            algebra.meet[a][b] = a & b;
            algebra.join[a][b] = a | b;
        }
    }
    return algebra;
}

std::vector<BooleanValuation> stone_spectrum(const FiniteBooleanAlgebra& algebra) {
    std::vector<BooleanValuation> out;
    for (const int atom : algebra.atoms()) {
        BooleanValuation w;
        w.values.resize(static_cast<std::size_t>(algebra.size()));
        for (int x = 0; x < algebra.size(); ++x) {
            w.values[static_cast<std::size_t>(x)] = algebra.leq(atom, x) ? 1 : 0;
        }
        out.push_back(std::move(w));
    }
    return out;
}

StoneDuality stone_double_dual(const FiniteBooleanAlgebra& algebra) {
    if (algebra.top == algebra.bottom) {
        throw std::invalid_argument("the trivial algebra has an empty spectrum");
    }
    StoneDuality duality;
    duality.spectrum = stone_spectrum(algebra);
    const std::size_t points = duality.spectrum.size();
    if (points > 12) {
        throw SizeLimitError("stone_double_dual: more than 12 spectrum points");
    }
    duality.clopen_algebra = powerset_algebra(static_cast<int>(points));

    const int n = algebra.size();
    duality.image.assign(static_cast<std::size_t>(n), 0);
    for (int a = 0; a < n; ++a) {
        std::uint64_t mask = 0;
        for (std::size_t w = 0; w < points; ++w) {
            if (duality.spectrum[w].values[static_cast<std::size_t>(a)] == 1) {
                mask |= std::uint64_t{1} << w;
            }
        }
        duality.image[static_cast<std::size_t>(a)] = mask;
    }

    // The map must be a bijective homomorphism onto the full power set.
    if (static_cast<std::uint64_t>(n) != (std::uint64_t{1} << points)) {
        throw std::invalid_argument("element count does not match 2^spectrum");
    }
    std::set<std::uint64_t> seen(duality.image.begin(), duality.image.end());
    if (seen.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("spectrum map is not injective");
    }
    const std::uint64_t full = (points == 64) ? ~std::uint64_t{0}
                                              : ((std::uint64_t{1} << points) - 1);
    if (duality.image[static_cast<std::size_t>(algebra.top)] != full ||
        duality.image[static_cast<std::size_t>(algebra.bottom)] != 0) {
        throw std::invalid_argument("spectrum map does not preserve the bounds");
    }
    for (int a = 0; a < n; ++a) {
        if (duality.image[static_cast<std::size_t>(algebra.neg[a])] !=
            (full ^ duality.image[static_cast<std::size_t>(a)])) {
            throw std::invalid_argument("spectrum map does not preserve complements");
        }
        for (int b = 0; b < n; ++b) {
            if (duality.image[static_cast<std::size_t>(algebra.meet[a][b])] !=
                (duality.image[static_cast<std::size_t>(a)] &
                 duality.image[static_cast<std::size_t>(b)])) {
                throw std::invalid_argument("spectrum map does not preserve meets");
            }
            if (duality.image[static_cast<std::size_t>(algebra.join[a][b])] !=
                (duality.image[static_cast<std::size_t>(a)] |
                 duality.image[static_cast<std::size_t>(b)])) {
                throw std::invalid_argument("spectrum map does not preserve joins");
            }
        }
    }
    return duality;
}

std::vector<std::vector<int>> maximal_cliques(const FinitePartialBooleanAlgebra& pba) {
    return all_maximal_cliques(pba.commensurable);
}

FiniteBooleanAlgebra clique_algebra(const FinitePartialBooleanAlgebra& pba,
                                    const std::vector<int>& clique) {
    std::vector<int> sorted = clique;
    std::sort(sorted.begin(), sorted.end());
    const int k = static_cast<int>(sorted.size());
    std::map<int, int> local;
    for (int i = 0; i < k; ++i) local[sorted[static_cast<std::size_t>(i)]] = i;

    const auto localize = [&](int global, const char* what) {
        const auto it = local.find(global);
        if (it == local.end()) {
            throw std::invalid_argument(std::string(what) + " escapes the clique (element '" +
                                        pba.elements[static_cast<std::size_t>(global)] + "')");
        }
        return it->second;
    };

    FiniteBooleanAlgebra algebra;
    for (const int g : sorted) algebra.elements.push_back(pba.elements[static_cast<std::size_t>(g)]);
    algebra.top = localize(pba.top, "top");
    algebra.bottom = localize(pba.bottom, "bottom");
    algebra.neg.resize(static_cast<std::size_t>(k));
    algebra.meet.assign(static_cast<std::size_t>(k), std::vector<int>(k, 0));
    algebra.join.assign(static_cast<std::size_t>(k), std::vector<int>(k, 0));
    for (int i = 0; i < k; ++i) {
        const int gi = sorted[static_cast<std::size_t>(i)];
        algebra.neg[static_cast<std::size_t>(i)] =
            localize(pba.neg[static_cast<std::size_t>(gi)], "complement");
        for (int j = 0; j < k; ++j) {
            const int gj = sorted[static_cast<std::size_t>(j)];
            const int m = pba.meet[static_cast<std::size_t>(gi)][static_cast<std::size_t>(gj)];
            const int jn = pba.join[static_cast<std::size_t>(gi)][static_cast<std::size_t>(gj)];
            if (m < 0 || jn < 0) {
                throw std::invalid_argument("operation undefined on a clique pair ('" +
                                            pba.elements[static_cast<std::size_t>(gi)] + "','" +
                                            pba.elements[static_cast<std::size_t>(gj)] + "')");
            }
            algebra.meet[i][j] = localize(m, "meet");
            algebra.join[i][j] = localize(jn, "join");
        }
    }
    return algebra;
}

std::vector<Violation> validate_pba(const FinitePartialBooleanAlgebra& pba) {
    std::vector<Violation> out;
    const int n = pba.size();
    if (n == 0) {
        out.push_back({"elements", "empty structure"});
        return out;
    }
    if (n > pba_element_cap) {
        throw SizeLimitError("validate_pba supports at most " +
                             std::to_string(pba_element_cap) + " elements");
    }

    std::set<std::string> names;
    for (const auto& e : pba.elements) {
        if (!name_ok(e)) out.push_back({"element '" + e + "'", "names must be non-empty and comma-free"});
        if (!names.insert(e).second) out.push_back({"element '" + e + "'", "duplicate name"});
    }
    auto in_range = [n](int v) { return v >= 0 && v < n; };
    if (!in_range(pba.top) || !in_range(pba.bottom)) {
        out.push_back({"bounds", "top/bottom index out of range"});
        return out;
    }
    if (pba.commensurable.size() != static_cast<std::size_t>(n) ||
        pba.meet.size() != static_cast<std::size_t>(n) ||
        pba.join.size() != static_cast<std::size_t>(n) ||
        pba.neg.size() != static_cast<std::size_t>(n)) {
        out.push_back({"tables", "tables do not match the element count"});
        return out;
    }
    for (int a = 0; a < n; ++a) {
        if (pba.commensurable[a].size() != static_cast<std::size_t>(n) ||
            pba.meet[a].size() != static_cast<std::size_t>(n) ||
            pba.join[a].size() != static_cast<std::size_t>(n)) {
            out.push_back({"tables", "ragged table"});
            return out;
        }
        if (!in_range(pba.neg[a])) {
            out.push_back({"neg", "value out of range"});
            return out;
        }
    }

    const auto name = [&](int a) { return pba.elements[static_cast<std::size_t>(a)]; };
    for (int a = 0; a < n; ++a) {
        if (!pba.commensurable[a][a]) {
            out.push_back({name(a), "commensurability is not reflexive"});
        }
        if (!pba.commensurable[a][pba.top] || !pba.commensurable[a][pba.bottom]) {
            out.push_back({name(a), "not commensurable with top/bottom"});
        }
        if (!pba.commensurable[a][pba.neg[a]]) {
            out.push_back({name(a), "not commensurable with its complement"});
        }
        for (int b = 0; b < n; ++b) {
            if (pba.commensurable[a][b] != pba.commensurable[b][a]) {
                out.push_back({name(a) + "," + name(b), "commensurability is not symmetric"});
            }
            const bool defined = pba.meet[a][b] >= 0 && pba.join[a][b] >= 0;
            const bool partial = pba.meet[a][b] >= 0 || pba.join[a][b] >= 0;
            if (pba.commensurable[a][b] && !defined) {
                out.push_back({name(a) + "," + name(b),
                               "meet/join undefined on a commensurable pair"});
            }
            if (!pba.commensurable[a][b] && partial) {
                out.push_back({name(a) + "," + name(b),
                               "meet/join defined on an incommensurable pair"});
            }
            if ((pba.meet[a][b] >= 0 && !in_range(pba.meet[a][b])) ||
                (pba.join[a][b] >= 0 && !in_range(pba.join[a][b]))) {
                out.push_back({name(a) + "," + name(b), "operation value out of range"});
            }
        }
    }
    if (!out.empty()) return out;

    for (const auto& clique : all_maximal_cliques(pba.commensurable)) {
        std::string label = "clique {";
        for (std::size_t i = 0; i < clique.size(); ++i) {
            if (i) label += ' ';
            label += name(clique[i]);
        }
        label += '}';
        try {
            const auto algebra = clique_algebra(pba, clique);
            for (const auto& v : validate_algebra(algebra)) {
                out.push_back({label + ", " + v.location, v.message});
            }
        } catch (const std::invalid_argument& e) {
            out.push_back({label, e.what()});
        }
    }
    return out;
}

namespace {

struct ValuationSearch {
    const FinitePartialBooleanAlgebra& pba;
    std::vector<std::vector<int>> found;

    bool assign(std::vector<int>& vals, int x, int v, std::vector<int>& queue) const {
        if (vals[static_cast<std::size_t>(x)] == v) return true;
        if (vals[static_cast<std::size_t>(x)] != -1) return false;
        vals[static_cast<std::size_t>(x)] = v;
        queue.push_back(x);
        return true;
    }

    /// Forces every consequence of the current assignment; false on conflict.
    bool propagate(std::vector<int>& vals, std::vector<int> queue) const {
        const int n = pba.size();
        while (!queue.empty()) {
            const int x = queue.back();
            queue.pop_back();
            const int vx = vals[static_cast<std::size_t>(x)];
            if (!assign(vals, pba.neg[static_cast<std::size_t>(x)], 1 - vx, queue)) return false;
            for (int a = 0; a < n; ++a) {
                for (int b = a; b < n; ++b) {
                    const int m = pba.meet[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
                    const int j = pba.join[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
                    if (m < 0) continue;
                    if (a != x && b != x && m != x && j != x) continue;
                    const int va = vals[static_cast<std::size_t>(a)];
                    const int vb = vals[static_cast<std::size_t>(b)];
                    const int vm = vals[static_cast<std::size_t>(m)];
                    const int vj = vals[static_cast<std::size_t>(j)];
                    if (va != -1 && vb != -1) {
                        if (!assign(vals, m, std::min(va, vb), queue)) return false;
                        if (!assign(vals, j, std::max(va, vb), queue)) return false;
                    }
                    if (vm == 1) {
                        if (!assign(vals, a, 1, queue)) return false;
                        if (!assign(vals, b, 1, queue)) return false;
                    }
                    if (vj == 0) {
                        if (!assign(vals, a, 0, queue)) return false;
                        if (!assign(vals, b, 0, queue)) return false;
                    }
                    if (vm == 0 && va == 1) {
                        if (!assign(vals, b, 0, queue)) return false;
                    }
                    if (vm == 0 && vb == 1) {
                        if (!assign(vals, a, 0, queue)) return false;
                    }
                    if (vj == 1 && va == 0) {
                        if (!assign(vals, b, 1, queue)) return false;
                    }
                    if (vj == 1 && vb == 0) {
                        if (!assign(vals, a, 1, queue)) return false;
                    }
                }
            }
        }
        return true;
    }

    void dfs(std::vector<int> vals) {
        int next = -1;
        for (int x = 0; x < pba.size(); ++x) {
            if (vals[static_cast<std::size_t>(x)] == -1) {
                next = x;
                break;
            }
        }
        if (next < 0) {
            found.push_back(std::move(vals));
            return;
        }
        for (int v = 0; v <= 1; ++v) {
            auto branch = vals;
            std::vector<int> queue;
            if (!assign(branch, next, v, queue)) continue;
            if (!propagate(branch, std::move(queue))) continue;
            dfs(std::move(branch));
        }
    }
};

bool check_valuation(const FinitePartialBooleanAlgebra& pba, const std::vector<int>& vals) {
    const int n = pba.size();
    if (vals[static_cast<std::size_t>(pba.top)] != 1 ||
        vals[static_cast<std::size_t>(pba.bottom)] != 0) {
        return false;
    }
    for (int a = 0; a < n; ++a) {
        if (vals[static_cast<std::size_t>(pba.neg[a])] != 1 - vals[static_cast<std::size_t>(a)]) {
            return false;
        }
        for (int b = 0; b < n; ++b) {
            const int m = pba.meet[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
            const int j = pba.join[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
            if (m >= 0 && vals[static_cast<std::size_t>(m)] !=
                              std::min(vals[static_cast<std::size_t>(a)],
                                       vals[static_cast<std::size_t>(b)])) {
                return false;
            }
            if (j >= 0 && vals[static_cast<std::size_t>(j)] !=
                              std::max(vals[static_cast<std::size_t>(a)],
                                       vals[static_cast<std::size_t>(b)])) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

std::vector<std::vector<int>> pba_valuations(const FinitePartialBooleanAlgebra& pba) {
    if (pba.size() > pba_element_cap) {
        throw SizeLimitError("pba_valuations supports at most " +
                             std::to_string(pba_element_cap) + " elements");
    }
    ValuationSearch search{pba, {}};
    std::vector<int> vals(static_cast<std::size_t>(pba.size()), -1);
    std::vector<int> queue;
    if (!search.assign(vals, pba.top, 1, queue) ||
        !search.assign(vals, pba.bottom, 0, queue) ||
        !search.propagate(vals, std::move(queue))) {
        return {};
    }
    search.dfs(std::move(vals));
    std::vector<std::vector<int>> out;
    for (auto& v : search.found) {
        if (check_valuation(pba, v)) out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> glue_valuations(const FinitePartialBooleanAlgebra& pba,
                                 const std::map<std::vector<int>, PartialValuation>& locals) {
    const auto cliques = maximal_cliques(pba);
    for (const auto& clique : cliques) {
        if (locals.find(clique) == locals.end()) {
            throw std::invalid_argument("locals do not cover all maximal cliques");
        }
    }
    for (const auto& [clique, local] : locals) {
        if (std::find(cliques.begin(), cliques.end(), clique) == cliques.end()) {
            throw std::invalid_argument("locals name an unknown clique");
        }
        for (const int x : clique) {
            if (local.values.find(x) == local.values.end()) {
                throw std::invalid_argument("local valuation misses element '" +
                                            pba.elements[static_cast<std::size_t>(x)] + "'");
            }
        }
        for (const auto& [x, v] : local.values) {
            if (std::find(clique.begin(), clique.end(), x) == clique.end()) {
                throw std::invalid_argument("local valuation leaves its clique");
            }
            if (v != 0 && v != 1) {
                throw std::invalid_argument("valuation values must be 0 or 1");
            }
        }
    }

    // Overlap agreement first, so a clash is reported as such even when one
    // of the locals is broken too.
    std::vector<int> glued(static_cast<std::size_t>(pba.size()), -1);
    for (const auto& clique : cliques) {
        const auto& local = locals.at(clique);
        for (const int x : clique) {
            const int v = local.values.at(x);
            const int seen = glued[static_cast<std::size_t>(x)];
            if (seen != -1 && seen != v) {
                throw GluingError(pba.elements[static_cast<std::size_t>(x)], seen, v);
            }
            glued[static_cast<std::size_t>(x)] = v;
        }
    }

    for (const auto& clique : cliques) {
        const auto algebra = clique_algebra(pba, clique);
        const auto& local = locals.at(clique);
        std::vector<int> restricted;
        restricted.reserve(clique.size());
        for (const int x : clique) restricted.push_back(local.values.at(x));
        const auto ok = [&]() {
            if (restricted[static_cast<std::size_t>(algebra.top)] != 1) return false;
            if (restricted[static_cast<std::size_t>(algebra.bottom)] != 0) return false;
            for (int a = 0; a < algebra.size(); ++a) {
                if (restricted[static_cast<std::size_t>(algebra.neg[a])] !=
                    1 - restricted[static_cast<std::size_t>(a)]) {
                    return false;
                }
                for (int b = 0; b < algebra.size(); ++b) {
                    if (restricted[static_cast<std::size_t>(algebra.meet[a][b])] !=
                        std::min(restricted[static_cast<std::size_t>(a)],
                                 restricted[static_cast<std::size_t>(b)])) {
                        return false;
                    }
                    if (restricted[static_cast<std::size_t>(algebra.join[a][b])] !=
                        std::max(restricted[static_cast<std::size_t>(a)],
                                 restricted[static_cast<std::size_t>(b)])) {
                        return false;
                    }
                }
            }
            return true;
        }();
        if (!ok) {
            throw std::invalid_argument("a local map is not a valuation on its clique");
        }
    }

    for (const int v : glued) {
        if (v == -1) throw std::logic_error("cliques do not cover all elements");
    }
    if (!check_valuation(pba, glued)) {
        throw std::logic_error("glued map is not a valuation");
    }
    return glued;
}

VectorConfiguration make_configuration(int dimension, std::vector<CVector> vectors) {
    if (dimension < 1) {
        throw std::invalid_argument("dimension must be positive");
    }
    VectorConfiguration configuration;
    configuration.dimension = dimension;
    for (auto& v : vectors) {
        if (v.size() != dimension) {
            throw std::invalid_argument("vector dimension mismatch");
        }
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag())) {
                throw std::invalid_argument("vector has non-finite entries");
            }
        }
        const double norm = v.norm();
        if (norm < tol::norm) {
            throw std::invalid_argument("zero vector in configuration");
        }
        if (std::abs(norm * norm - 1.0) > tol::norm) v /= norm;
    }
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        for (std::size_t j = i + 1; j < vectors.size(); ++j) {
            if (std::abs(vectors[i].dot(vectors[j])) >= 1.0 - tol::orth) {
                throw std::invalid_argument("vectors " + std::to_string(i) + " and " +
                                            std::to_string(j) + " span the same ray");
            }
        }
    }
    configuration.vectors = std::move(vectors);

    const std::size_t n = configuration.vectors.size();
    std::vector<std::vector<bool>> orthogonal(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool orth =
                std::abs(configuration.vectors[i].dot(configuration.vectors[j])) <= tol::orth;
            orthogonal[i][j] = orth;
            orthogonal[j][i] = orth;
        }
    }
    configuration.contexts = all_maximal_cliques(orthogonal);
    for (const auto& context : configuration.contexts) {
        if (context.size() > static_cast<std::size_t>(dimension)) {
            throw std::invalid_argument("an orthogonal context exceeds the dimension");
        }
    }
    return configuration;
}

namespace {

constexpr double element_match_tol = 1e-7;

int find_or_add(std::vector<Matrix>& matrices, const Matrix& m, int cap) {
    for (std::size_t i = 0; i < matrices.size(); ++i) {
        if (max_abs(matrices[i] - m) <= element_match_tol) return static_cast<int>(i);
    }
    if (static_cast<int>(matrices.size()) >= cap) {
        throw SizeLimitError("configuration closure exceeds " + std::to_string(cap) +
                             " elements");
    }
    matrices.push_back(m);
    return static_cast<int>(matrices.size()) - 1;
}

} // namespace

ConfigurationPba configuration_to_pba(const VectorConfiguration& configuration,
                                      int element_cap) {
    const int d = configuration.dimension;
    std::vector<Matrix> matrices;
    matrices.push_back(Matrix::Zero(d, d));
    matrices.push_back(Matrix::Identity(d, d));

    ConfigurationPba out;
    for (const auto& v : configuration.vectors) {
        out.vector_elements.push_back(find_or_add(matrices, projector_onto(v), element_cap));
    }

    // Context-local subalgebras: all subset sums of the context's rank-1
    // projectors plus the remainder onto the orthogonal complement.
    for (const auto& context : configuration.contexts) {
        std::vector<Matrix> members;
        Matrix sum = Matrix::Zero(d, d);
        for (const int v : context) {
            members.push_back(matrices[static_cast<std::size_t>(
                out.vector_elements[static_cast<std::size_t>(v)])]);
            sum += members.back();
        }
        const Matrix remainder = Matrix::Identity(d, d) - sum;
        if (max_abs(remainder) > tol::proj) members.push_back(remainder);
        const std::size_t k = members.size();
        for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
            Matrix m = Matrix::Zero(d, d);
            for (std::size_t b = 0; b < k; ++b) {
                if (mask & (std::size_t{1} << b)) m += members[b];
            }
            find_or_add(matrices, m, element_cap);
        }
    }

    // Close under complements and the meets/joins of commuting pairs, so the
    // partial operations are total on commensurable pairs.
    for (std::size_t i = 0; i < matrices.size(); ++i) {
        const Matrix complement = Matrix::Identity(d, d) - matrices[i];
        find_or_add(matrices, complement, element_cap);
        for (std::size_t j = 0; j < i; ++j) {
            if (max_abs(matrices[i] * matrices[j] - matrices[j] * matrices[i]) > tol::comm) {
                continue;
            }
            const Matrix product = matrices[i] * matrices[j];
            find_or_add(matrices, product, element_cap);
            find_or_add(matrices, matrices[i] + matrices[j] - product, element_cap);
        }
    }

    const int n = static_cast<int>(matrices.size());
    auto& pba = out.pba;
    pba.bottom = 0;
    pba.top = 1;
    pba.elements.resize(static_cast<std::size_t>(n));
    pba.elements[0] = "bot";
    pba.elements[1] = "top";
    for (std::size_t k = 0; k < out.vector_elements.size(); ++k) {
        pba.elements[static_cast<std::size_t>(out.vector_elements[k])] = "v" + std::to_string(k);
    }
    int extra = 0;
    for (int i = 0; i < n; ++i) {
        if (pba.elements[static_cast<std::size_t>(i)].empty()) {
            pba.elements[static_cast<std::size_t>(i)] = "e" + std::to_string(extra++);
        }
    }

    pba.commensurable.assign(static_cast<std::size_t>(n), std::vector<bool>(n, false));
    pba.meet.assign(static_cast<std::size_t>(n), std::vector<int>(n, -1));
    pba.join.assign(static_cast<std::size_t>(n), std::vector<int>(n, -1));
    pba.neg.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        pba.neg[static_cast<std::size_t>(i)] = find_or_add(
            matrices, Matrix::Identity(d, d) - matrices[static_cast<std::size_t>(i)], element_cap);
        for (int j = 0; j < n; ++j) {
            const auto& a = matrices[static_cast<std::size_t>(i)];
            const auto& b = matrices[static_cast<std::size_t>(j)];
            if (max_abs(a * b - b * a) > tol::comm) continue;
            pba.commensurable[i][j] = true;
            const Matrix product = a * b;
            pba.meet[i][j] = find_or_add(matrices, product, element_cap);
            pba.join[i][j] = find_or_add(matrices, a + b - product, element_cap);
        }
    }
    if (static_cast<int>(matrices.size()) != n) {
        throw std::logic_error("configuration closure was not a fixpoint");
    }
    return out;
}

KsColoring ks_colorable(const VectorConfiguration& configuration, std::size_t vector_cap) {
    if (configuration.dimension != 3) {
        throw std::invalid_argument("ks_colorable expects a dimension-3 configuration");
    }
    if (configuration.vectors.size() > vector_cap) {
        throw SizeLimitError("configuration exceeds " + std::to_string(vector_cap) + " vectors");
    }
    const std::size_t n = configuration.vectors.size();

    std::vector<std::vector<bool>> orthogonal(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool orth =
                std::abs(configuration.vectors[i].dot(configuration.vectors[j])) <= tol::orth;
            orthogonal[i][j] = orth;
            orthogonal[j][i] = orth;
        }
    }
    std::vector<std::vector<std::size_t>> contexts_of(n);
    for (std::size_t c = 0; c < configuration.contexts.size(); ++c) {
        for (const int v : configuration.contexts[c]) {
            contexts_of[static_cast<std::size_t>(v)].push_back(c);
        }
    }

    // Most-constrained vectors first.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (contexts_of[a].size() != contexts_of[b].size()) {
            return contexts_of[a].size() > contexts_of[b].size();
        }
        return a < b;
    });

    std::vector<int> colors(n, -1);
    std::function<bool(std::size_t)> search = [&](std::size_t pos) -> bool {
        if (pos == n) return true;
        const std::size_t v = order[pos];
        for (const int value : {1, 0}) {
            bool ok = true;
            if (value == 1) {
                for (std::size_t u = 0; u < n && ok; ++u) {
                    if (orthogonal[v][u] && colors[u] == 1) ok = false;
                }
            } else {
                for (const std::size_t c : contexts_of[v]) {
                    const auto& context = configuration.contexts[c];
                    if (context.size() != 3) continue;
                    bool any_one = false;
                    bool complete = true;
                    for (const int u : context) {
                        const int cu = (static_cast<std::size_t>(u) == v)
                                           ? 0
                                           : colors[static_cast<std::size_t>(u)];
                        if (cu == 1) any_one = true;
                        if (cu == -1) complete = false;
                    }
                    if (complete && !any_one) {
                        ok = false;
                        break;
                    }
                }
            }
            if (!ok) continue;
            colors[v] = value;
            if (search(pos + 1)) return true;
            colors[v] = -1;
        }
        return false;
    };

    KsColoring result;
    if (search(0)) {
        result.colorable = true;
        result.coloring = colors;
    }
    return result;
}

} // namespace ctx
