#include "ctx/io.hpp"

#include <algorithm>

#include "json.hpp"

#include "ctx/errors.hpp"

namespace ctx {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("malformed JSON");
    return j;
}

const json& require_key(const json& j, const char* key, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end()) throw ParseError(where + ": missing key '" + key + "'");
    return *it;
}

std::string require_string(const json& j, const std::string& where) {
    if (!j.is_string()) throw ParseError(where + ": expected a string");
    return j.get<std::string>();
}

std::vector<std::string> require_string_array(const json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where + ": expected an array");
    std::vector<std::string> out;
    out.reserve(j.size());
    for (const auto& item : j) out.push_back(require_string(item, where));
    return out;
}

Rational require_rational(const json& j, const std::string& where) {
    if (!j.is_string()) {
        throw ParseError(where + ": rationals are strings like \"3/8\" or \"1\"");
    }
    try {
        return parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ParseError(where + ": " + e.what());
    }
}

double require_number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ParseError(where + ": expected a number");
    return j.get<double>();
}

std::complex<double> parse_complex(const json& j, const std::string& where) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) {
        throw ParseError(where + ": expected [re, im]");
    }
    return {require_number(j[0], where), require_number(j[1], where)};
}

json complex_to_json(const std::complex<double>& z) {
    return json::array({z.real(), z.imag()});
}

MeasurementScenario scenario_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    const auto measurements = require_string_array(require_key(j, "measurements", where),
                                                   where + ".measurements");
    const auto& outcomes_json = require_key(j, "outcomes", where);
    if (!outcomes_json.is_object()) throw ParseError(where + ".outcomes: expected an object");
    std::map<std::string, std::vector<std::string>> outcomes;
    for (const auto& [key, value] : outcomes_json.items()) {
        outcomes[key] = require_string_array(value, where + ".outcomes." + key);
    }
    const auto& contexts_json = require_key(j, "contexts", where);
    if (!contexts_json.is_array()) throw ParseError(where + ".contexts: expected an array");
    std::vector<Context> contexts;
    for (const auto& c : contexts_json) {
        contexts.push_back(require_string_array(c, where + ".contexts"));
    }
    return MeasurementScenario::make(measurements, std::move(outcomes), std::move(contexts));
}

json scenario_to_json(const MeasurementScenario& scenario) {
    json j;
    j["measurements"] = scenario.measurements;
    j["outcomes"] = json::object();
    for (const auto& [m, os] : scenario.outcomes) j["outcomes"][m] = os;
    j["contexts"] = json::array();
    for (const auto& c : scenario.contexts) j["contexts"].push_back(c);
    return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

} // namespace

EmpiricalModel parse_model(const std::string& text) {
    const json j = parse_json(text);
    EmpiricalModel model;
    model.scenario = scenario_from_json(j, "model");
    model.tables.resize(model.scenario.contexts.size());

    const auto& tables = require_key(j, "tables", "model");
    if (!tables.is_object()) throw ParseError("model.tables: expected an object");
    for (const auto& [key, row] : tables.items()) {
        const int c = model.scenario.context_index(split_key(key));
        if (c < 0) throw ParseError("model.tables: unknown context '" + key + "'");
        if (!row.is_object()) {
            throw ParseError("model.tables." + key + ": expected an object");
        }
        for (const auto& [rkey, value] : row.items()) {
            model.tables[static_cast<std::size_t>(c)][split_key(rkey)] =
                require_rational(value, "model.tables." + key + "." + rkey);
        }
    }
    return model;
}

std::string serialize_model(const EmpiricalModel& model) {
    json j = scenario_to_json(model.scenario);
    j["tables"] = json::object();
    for (std::size_t c = 0; c < model.scenario.contexts.size(); ++c) {
        json row = json::object();
        for (const auto& [r, p] : model.tables[c]) row[join_key(r)] = format_rational(p);
        j["tables"][join_key(model.scenario.contexts[c])] = std::move(row);
    }
    return dump(j);
}

QuantumRealization parse_realization(const std::string& text) {
    const json j = parse_json(text);
    if (!j.is_object()) throw ParseError("realization: expected an object");

    const auto& state_json = require_key(j, "state", "realization");
    if (!state_json.is_array() || state_json.empty()) {
        throw ParseError("realization.state: expected a non-empty array");
    }
    CVector state(static_cast<Eigen::Index>(state_json.size()));
    for (std::size_t i = 0; i < state_json.size(); ++i) {
        state(static_cast<Eigen::Index>(i)) = parse_complex(state_json[i], "realization.state");
    }

    const auto& parties_json = require_key(j, "parties", "realization");
    if (!parties_json.is_array()) throw ParseError("realization.parties: expected an array");
    std::vector<Party> parties;
    for (std::size_t p = 0; p < parties_json.size(); ++p) {
        const std::string where = "realization.parties[" + std::to_string(p) + "]";
        const auto& pj = parties_json[p];
        if (!pj.is_object()) throw ParseError(where + ": expected an object");
        Party party;
        const auto& dim = require_key(pj, "dimension", where);
        if (!dim.is_number_integer() || dim.get<long long>() <= 0) {
            throw ParseError(where + ".dimension: expected a positive integer");
        }
        party.dimension = dim.get<Eigen::Index>();
        const auto& measurements = require_key(pj, "measurements", where);
        if (!measurements.is_object()) {
            throw ParseError(where + ".measurements: expected an object");
        }
        for (const auto& [id, projectors_json] : measurements.items()) {
            const std::string mwhere = where + ".measurements." + id;
            if (!projectors_json.is_array()) throw ParseError(mwhere + ": expected an array");
            std::vector<Matrix> projectors;
            for (const auto& matrix_json : projectors_json) {
                if (!matrix_json.is_array() || matrix_json.empty()) {
                    throw ParseError(mwhere + ": expected a matrix (array of rows)");
                }
                const auto rows = static_cast<Eigen::Index>(matrix_json.size());
                Matrix m(rows, rows);
                for (Eigen::Index r = 0; r < rows; ++r) {
                    const auto& row = matrix_json[static_cast<std::size_t>(r)];
                    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) {
                        throw ParseError(mwhere + ": matrix rows must be square");
                    }
                    for (Eigen::Index cidx = 0; cidx < rows; ++cidx) {
                        m(r, cidx) = parse_complex(row[static_cast<std::size_t>(cidx)], mwhere);
                    }
                }
                projectors.push_back(std::move(m));
            }
            party.measurements[id] = std::move(projectors);
        }
        parties.push_back(std::move(party));
    }

    MeasurementScenario scenario =
        scenario_from_json(require_key(j, "scenario", "realization"), "realization.scenario");
    return QuantumRealization{std::move(parties), StateVector(std::move(state)),
                              std::move(scenario)};
}

std::string serialize_realization(const QuantumRealization& realization) {
    json j;
    j["state"] = json::array();
    for (Eigen::Index i = 0; i < realization.state.amplitudes.size(); ++i) {
        j["state"].push_back(complex_to_json(realization.state.amplitudes(i)));
    }
    j["parties"] = json::array();
    for (const auto& party : realization.parties) {
        json pj;
        pj["dimension"] = party.dimension;
        pj["measurements"] = json::object();
        for (const auto& [id, projectors] : party.measurements) {
            json list = json::array();
            for (const auto& m : projectors) {
                json matrix = json::array();
                for (Eigen::Index r = 0; r < m.rows(); ++r) {
                    json row = json::array();
                    for (Eigen::Index c = 0; c < m.cols(); ++c) {
                        row.push_back(complex_to_json(m(r, c)));
                    }
                    matrix.push_back(std::move(row));
                }
                list.push_back(std::move(matrix));
            }
            pj["measurements"][id] = std::move(list);
        }
        j["parties"].push_back(std::move(pj));
    }
    j["scenario"] = scenario_to_json(realization.scenario);
    return dump(j);
}

VectorConfiguration parse_configuration(const std::string& text) {
    const json j = parse_json(text);
    if (!j.is_object()) throw ParseError("configuration: expected an object");
    const auto& dim = require_key(j, "dimension", "configuration");
    if (!dim.is_number_integer() || dim.get<long long>() < 1) {
        throw ParseError("configuration.dimension: expected a positive integer");
    }
    const auto& vectors_json = require_key(j, "vectors", "configuration");
    if (!vectors_json.is_array()) throw ParseError("configuration.vectors: expected an array");
    std::vector<CVector> vectors;
    for (std::size_t i = 0; i < vectors_json.size(); ++i) {
        const std::string where = "configuration.vectors[" + std::to_string(i) + "]";
        const auto& vj = vectors_json[i];
        if (!vj.is_array() || vj.empty()) throw ParseError(where + ": expected an array");
        CVector v(static_cast<Eigen::Index>(vj.size()));
        for (std::size_t k = 0; k < vj.size(); ++k) {
            v(static_cast<Eigen::Index>(k)) = parse_complex(vj[k], where);
        }
        vectors.push_back(std::move(v));
    }
    return make_configuration(dim.get<int>(), std::move(vectors));
}

std::string serialize_configuration(const VectorConfiguration& configuration) {
    json j;
    j["dimension"] = configuration.dimension;
    j["vectors"] = json::array();
    for (const auto& v : configuration.vectors) {
        json vj = json::array();
        for (Eigen::Index i = 0; i < v.size(); ++i) vj.push_back(complex_to_json(v(i)));
        j["vectors"].push_back(std::move(vj));
    }
    return dump(j);
}

FinitePartialBooleanAlgebra parse_pba(const std::string& text) {
    const json j = parse_json(text);
    if (!j.is_object()) throw ParseError("pba: expected an object");
    FinitePartialBooleanAlgebra pba;
    pba.elements = require_string_array(require_key(j, "elements", "pba"), "pba.elements");
    const int n = pba.size();
    std::map<std::string, int> index;
    for (int i = 0; i < n; ++i) index[pba.elements[static_cast<std::size_t>(i)]] = i;
    if (static_cast<int>(index.size()) != n) throw ParseError("pba.elements: duplicate names");

    const auto lookup = [&](const std::string& name, const std::string& where) {
        const auto it = index.find(name);
        if (it == index.end()) throw ParseError(where + ": unknown element '" + name + "'");
        return it->second;
    };

    pba.top = lookup(require_string(require_key(j, "top", "pba"), "pba.top"), "pba.top");
    pba.bottom =
        lookup(require_string(require_key(j, "bottom", "pba"), "pba.bottom"), "pba.bottom");

    pba.commensurable.assign(static_cast<std::size_t>(n), std::vector<bool>(n, false));
    pba.meet.assign(static_cast<std::size_t>(n), std::vector<int>(n, -1));
    pba.join.assign(static_cast<std::size_t>(n), std::vector<int>(n, -1));
    pba.neg.assign(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        pba.commensurable[i][i] = true;
        pba.meet[i][i] = i;
        pba.join[i][i] = i;
    }

    const auto& comm = require_key(j, "commensurable", "pba");
    if (!comm.is_array()) throw ParseError("pba.commensurable: expected an array of pairs");
    for (const auto& pair : comm) {
        const auto names = require_string_array(pair, "pba.commensurable");
        if (names.size() != 2) throw ParseError("pba.commensurable: expected pairs");
        const int a = lookup(names[0], "pba.commensurable");
        const int b = lookup(names[1], "pba.commensurable");
        pba.commensurable[a][b] = true;
        pba.commensurable[b][a] = true;
    }

    const auto& neg = require_key(j, "neg", "pba");
    if (!neg.is_object()) throw ParseError("pba.neg: expected an object");
    std::vector<bool> has_neg(static_cast<std::size_t>(n), false);
    for (const auto& [key, value] : neg.items()) {
        const int a = lookup(key, "pba.neg");
        pba.neg[static_cast<std::size_t>(a)] = lookup(require_string(value, "pba.neg"), "pba.neg");
        has_neg[static_cast<std::size_t>(a)] = true;
    }
    for (int i = 0; i < n; ++i) {
        if (!has_neg[static_cast<std::size_t>(i)]) {
            throw ParseError("pba.neg: missing entry for '" +
                             pba.elements[static_cast<std::size_t>(i)] + "'");
        }
    }

    const auto read_table = [&](const char* key, std::vector<std::vector<int>>& table) {
        const auto& tj = require_key(j, key, "pba");
        if (!tj.is_object()) throw ParseError(std::string("pba.") + key + ": expected an object");
        for (const auto& [pair_key, value] : tj.items()) {
            const auto parts = split_key(pair_key);
            if (parts.size() != 2) {
                throw ParseError(std::string("pba.") + key + ": keys are 'a,b' pairs");
            }
            const int a = lookup(parts[0], std::string("pba.") + key);
            const int b = lookup(parts[1], std::string("pba.") + key);
            const int r = lookup(require_string(value, std::string("pba.") + key),
                                 std::string("pba.") + key);
            table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = r;
            table[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = r;
        }
    };
    read_table("meet", pba.meet);
    read_table("join", pba.join);
    return pba;
}

std::string serialize_pba(const FinitePartialBooleanAlgebra& pba) {
    json j;
    j["elements"] = pba.elements;
    j["top"] = pba.elements[static_cast<std::size_t>(pba.top)];
    j["bottom"] = pba.elements[static_cast<std::size_t>(pba.bottom)];
    j["commensurable"] = json::array();
    const int n = pba.size();
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (pba.commensurable[a][b]) {
                j["commensurable"].push_back(json::array(
                    {pba.elements[static_cast<std::size_t>(a)],
                     pba.elements[static_cast<std::size_t>(b)]}));
            }
        }
    }
    j["neg"] = json::object();
    for (int a = 0; a < n; ++a) {
        j["neg"][pba.elements[static_cast<std::size_t>(a)]] =
            pba.elements[static_cast<std::size_t>(pba.neg[a])];
    }
    const auto write_table = [&](const char* key, const std::vector<std::vector<int>>& table) {
        json tj = json::object();
        for (int a = 0; a < n; ++a) {
            for (int b = a; b < n; ++b) {
                const int r = table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
                if (r < 0) continue;
                if (a == b && r == a) continue; // implied
                tj[pba.elements[static_cast<std::size_t>(a)] + "," +
                   pba.elements[static_cast<std::size_t>(b)]] =
                    pba.elements[static_cast<std::size_t>(r)];
            }
        }
        j[key] = std::move(tj);
    };
    write_table("meet", pba.meet);
    write_table("join", pba.join);
    return dump(j);
}

std::map<Context, Rational> parse_context_weights(const std::string& text,
                                                  const MeasurementScenario& scenario) {
    const json j = parse_json(text);
    if (!j.is_object()) throw ParseError("weights: expected an object");
    std::map<Context, Rational> weights;
    for (const auto& [key, value] : j.items()) {
        const int c = scenario.context_index(split_key(key));
        if (c < 0) throw ParseError("weights: unknown context '" + key + "'");
        weights[scenario.contexts[static_cast<std::size_t>(c)]] =
            require_rational(value, "weights." + key);
    }
    return weights;
}

namespace {

json functional_to_json(const CellFunctional& functional) {
    json out = json::object();
    for (const auto& [context, cells] : functional) {
        json row = json::object();
        for (const auto& [result, coefficient] : cells) {
            row[join_key(result)] = format_rational(coefficient);
        }
        out[join_key(context)] = std::move(row);
    }
    return out;
}

} // namespace

std::string serialize_certificate(const FeasibilityCertificate& certificate) {
    json j;
    j["feasible"] = certificate.feasible;
    if (certificate.feasible) {
        json weights = json::object();
        for (const auto& [assignment, weight] : certificate.distribution.weights) {
            weights[assignment_key(assignment)] = format_rational(weight);
        }
        j["weights"] = std::move(weights);
    } else {
        j["functional"] = functional_to_json(certificate.functional);
        j["value"] = format_rational(certificate.value);
        j["classical_bound"] = format_rational(certificate.classical_bound);
    }
    return dump(j);
}

std::string serialize_classification(const Classification& classification) {
    json j;
    j["level"] = to_string(classification.level);
    j["signalling"] = classification.signalling;
    json witness = json::object();
    switch (classification.level) {
        case ContextualityLevel::Strong:
            witness["global_sections"] = json::array();
            break;
        case ContextualityLevel::Logical:
            if (classification.non_extendable) {
                witness["context"] = join_key(classification.non_extendable->context);
                witness["result"] = join_key(classification.non_extendable->result);
                json chain = json::array();
                for (const auto& step : classification.non_extendable->chain) {
                    json sj;
                    sj["measurement"] = step.measurement;
                    sj["outcome"] = step.outcome;
                    sj["via"] = join_key(step.via_context);
                    chain.push_back(std::move(sj));
                }
                witness["chain"] = std::move(chain);
            }
            break;
        case ContextualityLevel::Weak:
            if (classification.certificate) {
                witness["functional"] = functional_to_json(classification.certificate->functional);
                witness["value"] = format_rational(classification.certificate->value);
                witness["classical_bound"] =
                    format_rational(classification.certificate->classical_bound);
            }
            break;
        case ContextualityLevel::NonContextual:
            if (classification.certificate) {
                json weights = json::object();
                for (const auto& [assignment, weight] :
                     classification.certificate->distribution.weights) {
                    weights[assignment_key(assignment)] = format_rational(weight);
                }
                witness["weights"] = std::move(weights);
            }
            break;
    }
    j["witness"] = std::move(witness);
    return dump(j);
}

std::string serialize_ks_coloring(const KsColoring& coloring) {
    json j;
    j["colorable"] = coloring.colorable;
    json cj = json::object();
    for (std::size_t i = 0; i < coloring.coloring.size(); ++i) {
        cj[std::to_string(i)] = coloring.coloring[i];
    }
    j["coloring"] = std::move(cj);
    return dump(j);
}

std::string serialize_sampling(const EmpiricalModel& model, const SamplingConfig& config,
                               const SamplingResult& result) {
    json j = scenario_to_json(model.scenario);
    j["tables"] = json::object();
    json counts = json::object();
    json deviations = json::object();
    for (std::size_t c = 0; c < model.scenario.contexts.size(); ++c) {
        const std::string key = join_key(model.scenario.contexts[c]);
        counts[key] = result.context_counts[c];
        if (!result.defined[c]) {
            j["tables"][key] = "undefined";
            continue;
        }
        json row = json::object();
        for (const auto& [r, p] : result.empirical[c]) row[join_key(r)] = format_rational(p);
        j["tables"][key] = std::move(row);
        json dev = json::object();
        for (const auto& [r, d] : result.deviations[c]) dev[join_key(r)] = d;
        deviations[key] = std::move(dev);
    }
    json sampling;
    sampling["rounds"] = config.rounds;
    sampling["seed"] = config.seed;
    sampling["context_counts"] = std::move(counts);
    sampling["deviations"] = std::move(deviations);
    sampling["max_abs_deviation"] = result.max_abs_deviation;
    json weights = json::object();
    for (const auto& [context, weight] : config.context_weights) {
        weights[join_key(context)] = format_rational(weight);
    }
    sampling["context_weights"] = std::move(weights);
    j["sampling"] = std::move(sampling);
    return dump(j);
}

} // namespace ctx
