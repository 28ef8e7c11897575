#pragma once

// File formats:
//
// Graph file (TOML): root keys n_nodes (integer) and optional normalized
// (bool), then one [[edge]] block per edge with integer i < j and nonzero
// float w.
//
// Run config (TOML): sections [graph] (either file = "path" or an inline
// n_nodes plus [[graph.edge]] blocks), [dynamics], [gains], [signal] with
// optional [[signal.term]] blocks, [sim], and [init]. Every key has the
// documented default, so the minimal valid config is a [graph] section.
//
// emit_config_toml writes back a fully resolved snapshot: inline graph,
// explicit signal terms, and the realized initial vectors, so re-running the
// emitted file reproduces the run exactly without re-drawing anything.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "signet/csv.hpp"
#include "signet/dynamics.hpp"
#include "signet/errors.hpp"
#include "signet/sim.hpp"
#include "signet/toml.hpp"

namespace signet {

namespace config_detail {

inline SignedGraph graph_from_tables(const TomlTable& head,
                                     const std::vector<TomlTable>* edge_tables,
                                     const std::string& where) {
    const std::int64_t n = require_integer(head, "n_nodes", where);
    if (n < 1 || n > 100000) throw FormatError(where + ": n_nodes out of range");
    const bool normalized = get_bool(head, "normalized", false, where);
    std::vector<SignedEdge> edges;
    if (edge_tables) {
        edges.reserve(edge_tables->size());
        for (const auto& t : *edge_tables) {
            SignedEdge e;
            e.i = static_cast<int>(require_integer(t, "i", where + " edge"));
            e.j = static_cast<int>(require_integer(t, "j", where + " edge"));
            e.w = require_number(t, "w", where + " edge");
            edges.push_back(e);
        }
    }
    try {
        return SignedGraph(static_cast<int>(n), std::move(edges), normalized);
    } catch (const std::invalid_argument& ex) {
        throw FormatError(where + ": " + ex.what());
    }
}

}  // namespace config_detail

inline SignedGraph read_graph_file(const std::string& path) {
    const TomlDocument doc = parse_toml_file(path);
    return config_detail::graph_from_tables(doc.root, doc.find_table_array("edge"),
                                            "graph file " + path);
}

inline void write_graph_file(const SignedGraph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "n_nodes = " << g.n_nodes() << "\n";
    if (g.normalized()) out << "normalized = true\n";
    for (const auto& e : g.edges()) {
        out << "\n[[edge]]\n";
        out << "i = " << e.i << "\n";
        out << "j = " << e.j << "\n";
        out << "w = " << format_sig17(e.w) << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

namespace config_detail {

inline NodeDynamics dynamics_from_table(const TomlTable* tbl) {
    if (!tbl) return NodeDynamics::cubic_soft();
    const std::string kind = get_string(*tbl, "kind", "cubic_soft", "[dynamics]");
    if (kind == "cubic_soft") return NodeDynamics::cubic_soft();
    if (kind == "zero") return NodeDynamics::zero();
    if (kind == "linear") return NodeDynamics::linear(require_number(*tbl, "a", "[dynamics]"));
    throw FormatError("[dynamics]: unknown kind '" + kind +
                      "' (expected zero, linear, or cubic_soft)");
}

inline std::vector<PeTerm> terms_from_tables(const std::vector<TomlTable>* term_tables,
                                             bool default_terms) {
    if (term_tables && !term_tables->empty()) {
        std::vector<PeTerm> terms;
        for (const auto& t : *term_tables) {
            PeTerm term;
            term.amplitude = require_number(t, "amplitude", "[[signal.term]]");
            term.angular_frequency = require_number(t, "omega", "[[signal.term]]");
            const std::string kind = require_string(t, "kind", "[[signal.term]]");
            if (kind == "sin") {
                term.kind = Waveform::sine;
            } else if (kind == "cos") {
                term.kind = Waveform::cosine;
            } else {
                throw FormatError("[[signal.term]]: kind must be \"sin\" or \"cos\"");
            }
            terms.push_back(term);
        }
        return terms;
    }
    return default_terms ? SignalConfig::reference_terms() : std::vector<PeTerm>{};
}

inline std::optional<Vec> optional_array(const TomlTable* tbl, const std::string& key,
                                         const std::string& where) {
    if (!tbl || !tbl->has(key)) return std::nullopt;
    return require_array(*tbl, key, where);
}

}  // namespace config_detail

/// Build a run configuration from parsed TOML. base_dir anchors a relative
/// [graph].file reference, normally the config file's own directory.
inline SimConfig config_from_toml(const TomlDocument& doc, const std::string& base_dir) {
    const TomlTable* graph_tbl = doc.find_table("graph");
    if (!graph_tbl) throw FormatError("config: missing [graph] section");

    SignedGraph graph = [&] {
        if (graph_tbl->has("file")) {
            std::filesystem::path p = require_string(*graph_tbl, "file", "[graph]");
            if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
            return read_graph_file(p.string());
        }
        return config_detail::graph_from_tables(*graph_tbl, doc.find_table_array("graph.edge"),
                                                "[graph]");
    }();

    std::vector<NodeDynamics> dynamics = {
        config_detail::dynamics_from_table(doc.find_table("dynamics"))};

    SimConfig cfg{PlantSpec(std::move(graph), std::move(dynamics))};

    if (const TomlTable* gains = doc.find_table("gains")) {
        cfg.gains.c1 = get_number(*gains, "c1", cfg.gains.c1, "[gains]");
        const std::string mode = get_string(*gains, "mode", "prop2", "[gains]");
        if (mode == "prop1") {
            cfg.gain_mode = GainMode::prop1;
        } else if (mode == "prop2") {
            cfg.gain_mode = GainMode::prop2;
        } else {
            throw FormatError("[gains]: mode must be \"prop1\" or \"prop2\"");
        }
    }

    const TomlTable* signal = doc.find_table("signal");
    if (signal) cfg.signal.kappa = get_number(*signal, "kappa", cfg.signal.kappa, "[signal]");
    const bool default_terms =
        signal ? get_bool(*signal, "default_terms", true, "[signal]") : true;
    cfg.signal.pe_terms =
        config_detail::terms_from_tables(doc.find_table_array("signal.term"), default_terms);

    if (const TomlTable* sim = doc.find_table("sim")) {
        cfg.dt = get_number(*sim, "dt", cfg.dt, "[sim]");
        cfg.horizon = get_number(*sim, "horizon", cfg.horizon, "[sim]");
        cfg.record_stride =
            static_cast<int>(get_integer(*sim, "record_stride", cfg.record_stride, "[sim]"));
        cfg.seed = static_cast<std::uint64_t>(get_integer(*sim, "seed",
                                                          static_cast<std::int64_t>(cfg.seed),
                                                          "[sim]"));
    }

    const TomlTable* init = doc.find_table("init");
    cfg.init.x0 = config_detail::optional_array(init, "x0", "[init]");
    cfg.init.x_hat0 = config_detail::optional_array(init, "xhat0", "[init]");
    cfg.init.w_hat0 = config_detail::optional_array(init, "what0", "[init]");

    try {
        cfg.validate();
    } catch (const std::invalid_argument& ex) {
        throw FormatError(std::string("config: ") + ex.what());
    }
    return cfg;
}

inline SimConfig read_config_file(const std::string& path) {
    const TomlDocument doc = parse_toml_file(path);
    return config_from_toml(doc, std::filesystem::path(path).parent_path().string());
}

namespace config_detail {

inline void emit_array(std::ostream& out, const std::string& key, const Vec& v) {
    out << key << " = [";
    for (std::size_t i = 0; i < v.size(); ++i)
        out << (i ? ", " : "") << format_sig17(v[i]);
    out << "]\n";
}

}  // namespace config_detail

/// Serialize a configuration with everything pinned: inline graph, explicit
/// terms, explicit initial vectors. Only built-in dynamics kinds round-trip.
inline std::string emit_config_toml(const SimConfig& cfg, const ResolvedInit& init) {
    const auto& dyn = cfg.plant.dynamics();
    if (dyn.size() != 1)
        throw std::invalid_argument("emit_config_toml: only shared node dynamics serialize");
    const std::string& dname = dyn[0].name();
    std::string dyn_kind, dyn_param;
    if (dname == "zero" || dname == "cubic_soft") {
        dyn_kind = dname;
    } else if (dname.rfind("linear:", 0) == 0) {
        dyn_kind = "linear";
        dyn_param = dname.substr(7);
    } else {
        throw std::invalid_argument("emit_config_toml: dynamics '" + dname +
                                    "' has no config form");
    }

    std::ostringstream out;
    out << "[graph]\n";
    out << "n_nodes = " << cfg.plant.n_nodes() << "\n";
    if (cfg.plant.graph().normalized()) out << "normalized = true\n";
    for (const auto& e : cfg.plant.graph().edges()) {
        out << "\n[[graph.edge]]\n";
        out << "i = " << e.i << "\n";
        out << "j = " << e.j << "\n";
        out << "w = " << format_sig17(e.w) << "\n";
    }

    out << "\n[dynamics]\n";
    out << "kind = \"" << dyn_kind << "\"\n";
    if (!dyn_param.empty()) out << "a = " << dyn_param << "\n";

    out << "\n[gains]\n";
    out << "c1 = " << format_sig17(cfg.gains.c1) << "\n";
    out << "mode = \"" << (cfg.gain_mode == GainMode::prop1 ? "prop1" : "prop2") << "\"\n";

    out << "\n[signal]\n";
    out << "kappa = " << format_sig17(cfg.signal.kappa) << "\n";
    out << "default_terms = false\n";
    for (const auto& t : cfg.signal.pe_terms) {
        out << "\n[[signal.term]]\n";
        out << "amplitude = " << format_sig17(t.amplitude) << "\n";
        out << "omega = " << format_sig17(t.angular_frequency) << "\n";
        out << "kind = \"" << (t.kind == Waveform::sine ? "sin" : "cos") << "\"\n";
    }

    out << "\n[sim]\n";
    out << "dt = " << format_sig17(cfg.dt) << "\n";
    out << "horizon = " << format_sig17(cfg.horizon) << "\n";
    out << "record_stride = " << cfg.record_stride << "\n";
    out << "seed = " << cfg.seed << "\n";

    out << "\n[init]\n";
    config_detail::emit_array(out, "x0", init.x0);
    config_detail::emit_array(out, "xhat0", init.x_hat0);
    config_detail::emit_array(out, "what0", init.w_hat0);
    return out.str();
}

}  // namespace signet
