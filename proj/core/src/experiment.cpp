#include "mcm/experiment.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <stdexcept>

#include "mcm/pca.hpp"

namespace mcm {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create directory " + dir + ": " + ec.message());
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known) throw std::invalid_argument("unknown config key " + where + "." + item.key());
    }
}

std::vector<Segment> schedule_from_json(const json& j) {
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (name == "default") return default_schedule();
        if (name == "clusterability") return clusterability_schedule();
        throw std::invalid_argument("unknown schedule preset: " + name);
    }
    if (!j.is_array()) throw std::invalid_argument("schedule must be a preset name or an array");
    std::vector<Segment> out;
    for (const auto& e : j) {
        check_keys(e, {"kind", "severity", "steps"}, "schedule[]");
        Segment seg;
        seg.corruption.kind = corruption_from_string(e.at("kind").get<std::string>());
        seg.corruption.severity = e.at("severity").get<int>();
        seg.steps = e.at("steps").get<int>();
        out.push_back(seg);
    }
    return out;
}

ordered_json schedule_to_json(const std::vector<Segment>& schedule) {
    ordered_json arr = ordered_json::array();
    for (const auto& seg : schedule) {
        ordered_json e;
        e["kind"] = to_string(seg.corruption.kind);
        e["severity"] = seg.corruption.severity;
        e["steps"] = seg.steps;
        arr.push_back(e);
    }
    return arr;
}

ordered_json counters_to_json(const MemoryCounters& c) {
    ordered_json j;
    j["inserts"] = c.inserts;
    j["spawns"] = c.spawns;
    j["assigned"] = c.assigned;
    j["replaced"] = c.replaced;
    j["evictions"] = c.evictions;
    j["merges"] = c.merges;
    j["merge_dropped"] = c.merge_dropped;
    j["assign_comparisons"] = c.assign_comparisons;
    j["consolidation_comparisons"] = c.consolidation_comparisons;
    return j;
}

int scm_budget(const ExperimentConfig& cfg) {
    return cfg.scm_capacity > 0 ? cfg.scm_capacity : cfg.memory.k_max * cfg.memory.capacity;
}

// Applies the derived fields that are not part of the serialized config.
ExperimentConfig wired(const ExperimentConfig& cfg) {
    ExperimentConfig c = cfg;
    c.stream.seed = Rng::mix(c.seed, 0x57AE0ULL);
    c.memory.class_count = c.stream.classes;
    c.memory.kind = c.stream.descriptor;
    return c;
}

double mean_finite(const std::vector<MetricsRow>& rows, double MetricsRow::* field) {
    double acc = 0.0;
    std::size_t n = 0;
    for (const auto& r : rows)
        if (std::isfinite(r.*field)) {
            acc += r.*field;
            n += 1;
        }
    return n == 0 ? kNan : acc / static_cast<double>(n);
}

ordered_json config_echo(const ExperimentConfig& cfg) {
    return ordered_json::parse(experiment_config_to_json(cfg));
}

}  // namespace

ExperimentConfig experiment_config_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    check_keys(j, {"seed", "variant", "steps", "n_adapt", "scm_capacity", "stream", "memory",
                   "diagnostics"},
               "config");

    ExperimentConfig cfg;
    cfg.seed = j.value("seed", cfg.seed);
    cfg.variant = j.value("variant", cfg.variant);
    cfg.steps = j.value("steps", cfg.steps);
    cfg.n_adapt = j.value("n_adapt", cfg.n_adapt);
    cfg.scm_capacity = j.value("scm_capacity", cfg.scm_capacity);

    if (j.contains("stream")) {
        const json& s = j.at("stream");
        check_keys(s,
                   {"classes", "images_per_class", "height", "width", "batch", "class_spread",
                    "dirichlet_delta", "descriptor", "schedule"},
                   "stream");
        cfg.stream.classes = s.value("classes", cfg.stream.classes);
        cfg.stream.images_per_class = s.value("images_per_class", cfg.stream.images_per_class);
        cfg.stream.height = s.value("height", cfg.stream.height);
        cfg.stream.width = s.value("width", cfg.stream.width);
        cfg.stream.batch = s.value("batch", cfg.stream.batch);
        cfg.stream.class_spread = s.value("class_spread", cfg.stream.class_spread);
        cfg.stream.dirichlet_delta = s.value("dirichlet_delta", cfg.stream.dirichlet_delta);
        if (s.contains("descriptor"))
            cfg.stream.descriptor =
                descriptor_kind_from_string(s.at("descriptor").get<std::string>());
        if (s.contains("schedule")) cfg.stream.schedule = schedule_from_json(s.at("schedule"));
    }

    if (j.contains("memory")) {
        const json& m = j.at("memory");
        check_keys(m,
                   {"capacity", "k_max", "tau", "metric", "strategy", "lambda_age",
                    "lambda_uncertainty", "lambda_distance"},
                   "memory");
        cfg.memory.capacity = m.value("capacity", cfg.memory.capacity);
        cfg.memory.k_max = m.value("k_max", cfg.memory.k_max);
        cfg.memory.tau = m.value("tau", cfg.memory.tau);
        if (m.contains("metric"))
            cfg.memory.metric.kind = metric_kind_from_string(m.at("metric").get<std::string>());
        if (m.contains("strategy"))
            cfg.memory.strategy = merge_strategy_from_string(m.at("strategy").get<std::string>());
        cfg.memory.lambda_age = m.value("lambda_age", cfg.memory.lambda_age);
        cfg.memory.lambda_uncertainty =
            m.value("lambda_uncertainty", cfg.memory.lambda_uncertainty);
        cfg.memory.lambda_distance = m.value("lambda_distance", cfg.memory.lambda_distance);
    }

    if (j.contains("diagnostics")) {
        const json& d = j.at("diagnostics");
        check_keys(d,
                   {"window", "emit_stride", "refresh_stride", "kref_cap", "coverage_threshold",
                    "with_reference", "probe_per_step", "fit"},
                   "diagnostics");
        cfg.diagnostics.window = d.value("window", cfg.diagnostics.window);
        cfg.diagnostics.emit_stride = d.value("emit_stride", cfg.diagnostics.emit_stride);
        cfg.diagnostics.refresh_stride = d.value("refresh_stride", cfg.diagnostics.refresh_stride);
        cfg.diagnostics.kref_cap = d.value("kref_cap", cfg.diagnostics.kref_cap);
        cfg.diagnostics.coverage_threshold =
            d.value("coverage_threshold", cfg.diagnostics.coverage_threshold);
        cfg.diagnostics.with_reference = d.value("with_reference", cfg.diagnostics.with_reference);
        cfg.diagnostics.probe_per_step = d.value("probe_per_step", cfg.diagnostics.probe_per_step);
        if (d.contains("fit")) {
            const json& f = d.at("fit");
            check_keys(f, {"max_iter", "tol", "variance_floor", "restarts"}, "diagnostics.fit");
            cfg.diagnostics.fit.max_iter = f.value("max_iter", cfg.diagnostics.fit.max_iter);
            cfg.diagnostics.fit.tol = f.value("tol", cfg.diagnostics.fit.tol);
            cfg.diagnostics.fit.variance_floor =
                f.value("variance_floor", cfg.diagnostics.fit.variance_floor);
            cfg.diagnostics.fit.restarts = f.value("restarts", cfg.diagnostics.fit.restarts);
        }
    }
    return cfg;
}

std::string experiment_config_to_json(const ExperimentConfig& cfg, int indent) {
    ordered_json j;
    j["seed"] = cfg.seed;
    j["variant"] = cfg.variant;
    j["steps"] = cfg.steps;
    j["n_adapt"] = cfg.n_adapt;
    j["scm_capacity"] = cfg.scm_capacity;

    ordered_json s;
    s["classes"] = cfg.stream.classes;
    s["images_per_class"] = cfg.stream.images_per_class;
    s["height"] = cfg.stream.height;
    s["width"] = cfg.stream.width;
    s["batch"] = cfg.stream.batch;
    s["class_spread"] = cfg.stream.class_spread;
    s["dirichlet_delta"] = cfg.stream.dirichlet_delta;
    s["descriptor"] = to_string(cfg.stream.descriptor);
    s["schedule"] = schedule_to_json(cfg.stream.schedule.empty() ? default_schedule()
                                                                 : cfg.stream.schedule);
    j["stream"] = s;

    ordered_json m;
    m["capacity"] = cfg.memory.capacity;
    m["k_max"] = cfg.memory.k_max;
    m["tau"] = cfg.memory.tau;
    m["metric"] = to_string(cfg.memory.metric.kind);
    m["strategy"] = to_string(cfg.memory.strategy);
    m["lambda_age"] = cfg.memory.lambda_age;
    m["lambda_uncertainty"] = cfg.memory.lambda_uncertainty;
    m["lambda_distance"] = cfg.memory.lambda_distance;
    j["memory"] = m;

    ordered_json d;
    d["window"] = cfg.diagnostics.window;
    d["emit_stride"] = cfg.diagnostics.emit_stride;
    d["refresh_stride"] = cfg.diagnostics.refresh_stride;
    d["kref_cap"] = cfg.diagnostics.kref_cap;
    d["coverage_threshold"] = cfg.diagnostics.coverage_threshold;
    d["with_reference"] = cfg.diagnostics.with_reference;
    d["probe_per_step"] = cfg.diagnostics.probe_per_step;
    ordered_json f;
    f["max_iter"] = cfg.diagnostics.fit.max_iter;
    f["tol"] = cfg.diagnostics.fit.tol;
    f["variance_floor"] = cfg.diagnostics.fit.variance_floor;
    f["restarts"] = cfg.diagnostics.fit.restarts;
    d["fit"] = f;
    j["diagnostics"] = d;

    return j.dump(indent) + "\n";
}

RunResult run_experiment(const ExperimentConfig& raw, const StepObserver& observer) {
    if (raw.variant != "mcm" && raw.variant != "scm")
        throw std::invalid_argument("variant must be \"mcm\" or \"scm\"");
    if (raw.n_adapt < std::max(1, raw.variant == "mcm" ? raw.memory.k_max : 1))
        throw std::invalid_argument("n_adapt must be >= k_max");
    const DiagnosticsConfig& dg = raw.diagnostics;
    if (dg.window < 1 || dg.emit_stride < 1 || dg.refresh_stride < 1 || dg.kref_cap < 1)
        throw std::invalid_argument("diagnostics strides, window and kref_cap must be >= 1");
    if (dg.probe_per_step < 0) throw std::invalid_argument("probe_per_step must be >= 0");
    if (dg.with_reference && dg.probe_per_step < 1)
        throw std::invalid_argument("probe_per_step must be >= 1 when the reference is enabled");

    const ExperimentConfig cfg = wired(raw);
    const bool is_mcm = cfg.variant == "mcm";
    const auto t0 = std::chrono::steady_clock::now();

    Stream stream(cfg.stream);
    const long steps = cfg.steps >= 0 ? cfg.steps : stream.schedule_steps();

    std::optional<MultiClusterMemory> mem;
    std::optional<SingleClusterMemory> scm;
    if (is_mcm) {
        mem.emplace(cfg.memory);
    } else {
        ScmParams sp;
        sp.capacity = scm_budget(cfg);
        sp.lambda_age = cfg.memory.lambda_age;
        sp.lambda_uncertainty = cfg.memory.lambda_uncertainty;
        sp.class_count = cfg.memory.class_count;
        sp.kind = cfg.memory.kind;
        scm.emplace(sp);
    }

    Rng retrieve_rng(Rng::mix(cfg.seed, 0x8E7BULL));
    std::deque<std::vector<double>> window;
    std::optional<SelectKResult> reference;

    RunResult result;
    result.steps = steps;

    for (long step = 0; step < steps; ++step) {
        const StreamBatch batch = stream.batch(step);
        for (const auto& arrival : batch.arrivals) {
            MemorySample s = stream.to_sample(arrival);
            s.id = arrival.payload_ref;
            if (is_mcm) mem->insert(s, step);
            else scm->insert(s, step);
        }
        if (is_mcm) mem->age_tick();
        else scm->age_tick();
        if (is_mcm) mem->retrieve(static_cast<std::size_t>(cfg.n_adapt), retrieve_rng, step);
        else scm->retrieve(static_cast<std::size_t>(cfg.n_adapt), retrieve_rng, step);

        for (int p = 0; p < dg.probe_per_step; ++p) {
            const auto& probe =
                batch.arrivals[static_cast<std::size_t>(step + p) % batch.arrivals.size()];
            window.push_back(probe.descriptor.values);
        }
        while (window.size() > static_cast<std::size_t>(dg.window)) window.pop_front();

        const long done = step + 1;
        const bool emit_due = done % dg.emit_stride == 0;
        if (dg.with_reference && window.size() >= 32 &&
            (done % dg.refresh_stride == 0 || (!reference && emit_due))) {
            Matrix wm(window.begin(), window.end());
            FitConfig fc = dg.fit;
            fc.seed = Rng::mix(cfg.seed, 0x4EF17ULL + static_cast<std::uint64_t>(done));
            reference = search_components(wm, dg.kref_cap, fc);
        }

        if (emit_due) {
            const MemorySnapshot snap = is_mcm ? mem->snapshot() : scm->snapshot();
            const Matrix contents = snap.descriptor_matrix();
            MetricsRow row;
            row.step = done;
            row.clusters = static_cast<int>(snap.clusters.size());
            row.samples = contents.size();
            row.imbalance = row.entropy = row.coverage = row.energy = kNan;
            if (reference && !contents.empty()) {
                const auto counts = component_occupancy(reference->best_model, contents);
                row.imbalance = imbalance_ratio(counts);
                row.entropy = occupancy_entropy(counts);
                row.coverage = mode_coverage(counts, dg.coverage_threshold);
                row.reference_k = reference->best_k;
            }
            if (!contents.empty() && !window.empty())
                row.energy = energy_distance(contents, Matrix(window.begin(), window.end()));
            result.rows.push_back(row);
        }

        if (observer) observer(step, mem ? &*mem : nullptr, scm ? &*scm : nullptr);
    }

    if (is_mcm) {
        result.counters = mem->counters();
        result.merges = mem->merge_log();
        result.final_snapshot = mem->snapshot();
    } else {
        result.counters = scm->counters();
        result.final_snapshot = scm->snapshot();
    }
    result.mean_imbalance = mean_finite(result.rows, &MetricsRow::imbalance);
    result.mean_entropy = mean_finite(result.rows, &MetricsRow::entropy);
    result.mean_coverage = mean_finite(result.rows, &MetricsRow::coverage);
    result.mean_energy = mean_finite(result.rows, &MetricsRow::energy);
    result.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                               t0)
                         .count();
    return result;
}

std::string metrics_csv(const std::vector<MetricsRow>& rows, const std::string& variant) {
    std::string out =
        "step,imbalance,entropy,coverage,energy_distance,reference_k,clusters,samples,variant\n";
    for (const auto& r : rows) {
        out += std::to_string(r.step) + ',' + fmt_double(r.imbalance) + ',' +
               fmt_double(r.entropy) + ',' + fmt_double(r.coverage) + ',' +
               fmt_double(r.energy) + ',' + std::to_string(r.reference_k) + ',' +
               std::to_string(r.clusters) + ',' + std::to_string(r.samples) + ',' + variant +
               '\n';
    }
    return out;
}

RunResult run_simulate(const ExperimentConfig& cfg, const std::string& out_dir,
                       const StepObserver& observer) {
    RunResult result = run_experiment(cfg, observer);
    ensure_dir(out_dir);
    write_text_file(join_path(out_dir, "metrics.csv"), metrics_csv(result.rows, cfg.variant));
    write_text_file(join_path(out_dir, "snapshot.json"),
                    snapshot_to_json(result.final_snapshot) + "\n");

    ordered_json manifest;
    manifest["command"] = "simulate";
    manifest["config"] = config_echo(cfg);
    manifest["steps"] = result.steps;
    manifest["rows"] = result.rows.size();
    manifest["mean_imbalance"] = result.mean_imbalance;
    manifest["mean_entropy"] = result.mean_entropy;
    manifest["mean_coverage"] = result.mean_coverage;
    manifest["mean_energy"] = result.mean_energy;
    manifest["counters"] = counters_to_json(result.counters);
    manifest["merge_count"] = result.merges.size();
    manifest["wall_ms"] = result.wall_ms;
    manifest["files"] = {"metrics.csv", "snapshot.json"};
    write_text_file(join_path(out_dir, "manifest.json"), manifest.dump(2) + "\n");
    return result;
}

ClusterabilitySummary run_clusterability(const ExperimentConfig& raw, std::size_t window,
                                         std::size_t stride, int k_cap,
                                         const std::string& out_dir) {
    ExperimentConfig cfg = raw;
    if (cfg.stream.schedule.empty()) {
        cfg.stream.schedule = clusterability_schedule();
        cfg.stream.batch = 8;
    }
    if (k_cap < 1) throw std::invalid_argument("k_cap must be >= 1");
    const ExperimentConfig wired_cfg = wired(cfg);

    Stream stream(wired_cfg.stream);
    const long steps = wired_cfg.steps >= 0 ? wired_cfg.steps : stream.schedule_steps();
    Matrix data;
    data.reserve(static_cast<std::size_t>(steps) * wired_cfg.stream.batch);
    for (long step = 0; step < steps; ++step)
        for (const auto& arrival : stream.batch(step).arrivals)
            data.push_back(arrival.descriptor.values);

    std::vector<int> ks;
    for (int k = 1; k <= std::min<int>(k_cap, static_cast<int>(window)); ++k) ks.push_back(k);
    FitConfig fc = wired_cfg.diagnostics.fit;
    fc.seed = Rng::mix(wired_cfg.seed, 0xC157E2ULL);

    ClusterabilitySummary summary;
    summary.points = clusterability(data, window, stride, ks, fc);
    double acc = 0.0;
    for (const auto& p : summary.points) acc += p.k_star;
    summary.mean_k = summary.points.empty() ? kNan
                                            : acc / static_cast<double>(summary.points.size());

    ensure_dir(out_dir);
    std::string cl = "window_start,k_star\n";
    std::string bic_rows = "window_start,k,bic,log_likelihood\n";
    for (const auto& p : summary.points) {
        cl += std::to_string(p.start) + ',' + std::to_string(p.k_star) + '\n';
        for (const auto& e : p.table)
            bic_rows += std::to_string(p.start) + ',' + std::to_string(e.k) + ',' +
                        fmt_double(e.bic) + ',' + fmt_double(e.log_likelihood) + '\n';
    }
    write_text_file(join_path(out_dir, "clusterability.csv"), cl);
    write_text_file(join_path(out_dir, "bic.csv"), bic_rows);

    ordered_json manifest;
    manifest["command"] = "clusterability";
    manifest["config"] = config_echo(cfg);
    manifest["window"] = window;
    manifest["stride"] = stride;
    manifest["k_cap"] = k_cap;
    manifest["descriptors"] = data.size();
    manifest["windows"] = summary.points.size();
    manifest["mean_k"] = summary.mean_k;
    manifest["files"] = {"clusterability.csv", "bic.csv"};
    write_text_file(join_path(out_dir, "manifest.json"), manifest.dump(2) + "\n");
    return summary;
}

std::vector<AblateCell> run_ablate(const ExperimentConfig& base, const std::string& axis,
                                   int repeats, const std::string& out_dir) {
    if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");

    struct Option {
        std::string value;
        std::function<void(ExperimentConfig&)> apply;
    };
    std::vector<Option> options;
    if (axis == "tau") {
        for (double tau : {0.15, 0.30, 0.45, 0.60})
            options.push_back({fmt_double(tau), [tau](ExperimentConfig& c) { c.memory.tau = tau; }});
    } else if (axis == "k_max") {
        for (int k : {1, 2, 3, 5, 8})
            options.push_back(
                {std::to_string(k), [k](ExperimentConfig& c) { c.memory.k_max = k; }});
    } else if (axis == "metric") {
        for (MetricKind kind : {MetricKind::Euclidean, MetricKind::Manhattan, MetricKind::Cosine,
                                MetricKind::Mahalanobis})
            options.push_back({to_string(kind), [kind](ExperimentConfig& c) {
                                   c.memory.metric.kind = kind;
                               }});
    } else if (axis == "strategy") {
        for (MergeStrategy s : {MergeStrategy::Acc, MergeStrategy::Gcc,
                                MergeStrategy::SmallestMerge, MergeStrategy::Lru})
            options.push_back(
                {to_string(s), [s](ExperimentConfig& c) { c.memory.strategy = s; }});
    } else {
        throw std::invalid_argument("unknown ablation axis: " + axis +
                                    " (expected tau, k_max, metric or strategy)");
    }

    std::vector<AblateCell> cells;
    for (const auto& opt : options)
        for (int rep = 0; rep < repeats; ++rep) {
            ExperimentConfig cfg = base;
            cfg.variant = "mcm";
            cfg.steps = base.steps > 0 ? base.steps : 300;
            cfg.seed = Rng::mix(base.seed, 0xAB1A7EULL + static_cast<std::uint64_t>(rep));
            opt.apply(cfg);
            const RunResult r = run_experiment(cfg);
            AblateCell cell;
            cell.axis = axis;
            cell.value = opt.value;
            cell.seed = cfg.seed;
            cell.steps = r.steps;
            cell.mean_imbalance = r.mean_imbalance;
            cell.mean_entropy = r.mean_entropy;
            cell.mean_coverage = r.mean_coverage;
            cell.mean_energy = r.mean_energy;
            cell.clusters_final = static_cast<int>(r.final_snapshot.clusters.size());
            cell.merges = r.counters.merges;
            cell.evictions = r.counters.evictions;
            cell.wall_ms = r.wall_ms;
            cells.push_back(cell);
        }

    ensure_dir(out_dir);
    std::string csv =
        "axis,value,seed,steps,mean_imbalance,mean_entropy,mean_coverage,mean_energy,"
        "clusters_final,merges,evictions,wall_ms\n";
    for (const auto& c : cells)
        csv += c.axis + ',' + c.value + ',' + std::to_string(c.seed) + ',' +
               std::to_string(c.steps) + ',' + fmt_double(c.mean_imbalance) + ',' +
               fmt_double(c.mean_entropy) + ',' + fmt_double(c.mean_coverage) + ',' +
               fmt_double(c.mean_energy) + ',' + std::to_string(c.clusters_final) + ',' +
               std::to_string(c.merges) + ',' + std::to_string(c.evictions) + ',' +
               fmt_double(c.wall_ms) + '\n';
    write_text_file(join_path(out_dir, "ablate.csv"), csv);

    ordered_json manifest;
    manifest["command"] = "ablate";
    manifest["config"] = config_echo(base);
    manifest["axis"] = axis;
    manifest["repeats"] = repeats;
    manifest["cells"] = cells.size();
    manifest["files"] = {"ablate.csv"};
    write_text_file(join_path(out_dir, "manifest.json"), manifest.dump(2) + "\n");
    return cells;
}

std::vector<ScalingCell> run_scaling(const ExperimentConfig& base,
                                     const std::vector<long>& step_counts, int seeds,
                                     const std::string& out_dir) {
    if (step_counts.empty()) throw std::invalid_argument("scaling needs at least one step count");
    for (long t : step_counts)
        if (t < 1) throw std::invalid_argument("scaling step counts must be >= 1");
    if (seeds < 1) throw std::invalid_argument("seeds must be >= 1");

    std::vector<ScalingCell> cells;
    for (long t : step_counts)
        for (int i = 0; i < seeds; ++i)
            for (const char* variant : {"mcm", "scm"}) {
                ExperimentConfig cfg = base;
                cfg.variant = variant;
                cfg.steps = t;
                cfg.seed = Rng::mix(base.seed, 0x5CA11EULL + static_cast<std::uint64_t>(i));
                cfg.diagnostics.with_reference = false;
                cfg.diagnostics.emit_stride = static_cast<int>(t);
                const RunResult r = run_experiment(cfg);
                ScalingCell cell;
                cell.steps = t;
                cell.seed_index = i;
                cell.variant = variant;
                cell.energy = r.rows.empty() ? kNan : r.rows.back().energy;
                cell.samples = r.rows.empty() ? 0 : r.rows.back().samples;
                cell.wall_ms = r.wall_ms;
                cells.push_back(cell);
            }

    ensure_dir(out_dir);
    std::string csv = "steps,seed_index,variant,energy_distance,samples,wall_ms\n";
    for (const auto& c : cells)
        csv += std::to_string(c.steps) + ',' + std::to_string(c.seed_index) + ',' + c.variant +
               ',' + fmt_double(c.energy) + ',' + std::to_string(c.samples) + ',' +
               fmt_double(c.wall_ms) + '\n';
    write_text_file(join_path(out_dir, "scaling.csv"), csv);

    ordered_json manifest;
    manifest["command"] = "scaling";
    manifest["config"] = config_echo(base);
    manifest["step_counts"] = step_counts;
    manifest["seeds"] = seeds;
    manifest["cells"] = cells.size();
    manifest["files"] = {"scaling.csv"};
    write_text_file(join_path(out_dir, "manifest.json"), manifest.dump(2) + "\n");
    return cells;
}

void export_projection(const ExperimentConfig& cfg, const std::string& out_dir) {
    const RunResult result = run_experiment(cfg);
    const Matrix contents = result.final_snapshot.descriptor_matrix();
    if (contents.empty()) throw std::runtime_error("projection needs a nonempty memory");

    const PcaResult pca = fit_pca(contents, 2);
    const ExperimentConfig wcfg = wired(cfg);
    Stream stream(wcfg.stream);
    const int mode_count = static_cast<int>(stream.distinct_modes().size());
    const int per_mode = std::max(1, static_cast<int>(contents.size()) / mode_count);
    const Matrix reference = stream.balanced_reference(per_mode, 0xFACADEULL);

    auto coords = [&](const std::vector<double>& x) {
        const std::vector<double> p = pca_project(pca, x);
        return std::pair<double, double>(p[0], p.size() > 1 ? p[1] : 0.0);
    };

    std::string csv = "source,cluster,member_id,diag_mode,diag_class,x,y\n";
    for (std::size_t ci = 0; ci < result.final_snapshot.clusters.size(); ++ci)
        for (const auto& m : result.final_snapshot.clusters[ci].members) {
            const auto [x, y] = coords(m.descriptor.values);
            csv += "memory," + std::to_string(ci) + ',' + std::to_string(m.id) + ',' +
                   std::to_string(m.diag_mode) + ',' + std::to_string(m.diag_class) + ',' +
                   fmt_double(x) + ',' + fmt_double(y) + '\n';
        }
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const auto [x, y] = coords(reference[i]);
        csv += "reference,-1,-1," + std::to_string(static_cast<int>(i) / per_mode) + ",-1," +
               fmt_double(x) + ',' + fmt_double(y) + '\n';
    }
    ensure_dir(out_dir);
    write_text_file(join_path(out_dir, "projection.csv"), csv);

    ordered_json manifest;
    manifest["command"] = "project";
    manifest["config"] = config_echo(cfg);
    manifest["memory_points"] = contents.size();
    manifest["reference_points"] = reference.size();
    manifest["explained"] = pca.explained;
    manifest["files"] = {"projection.csv"};
    write_text_file(join_path(out_dir, "manifest.json"), manifest.dump(2) + "\n");
}

}  // namespace mcm
