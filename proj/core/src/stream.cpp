#include "mcm/stream.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mcm {

namespace {

constexpr double kSigma[5] = {0.08, 0.16, 0.35, 0.70, 1.50};
constexpr double kContrast[5] = {0.75, 0.55, 0.38, 0.25, 0.12};
constexpr double kBrightness[5] = {-0.65, -0.28, 0.02, 0.21, 0.55};
constexpr int kBlurWidth[5] = {3, 5, 7, 9, 11};
constexpr double kImpulse[5] = {0.03, 0.06, 0.12, 0.20, 0.30};

// Class palette: per-channel offsets from a common center, spaced by
// irrational multiples so distinct classes never coincide.
constexpr double kPaletteCenter = 0.555;
constexpr double kPaletteRange[3] = {0.05, 0.035, 0.035};
constexpr double kPaletteMult[3] = {0.6180339887498949, 0.4142135623730951,
                                    0.7320508075688772};
constexpr double kAmplitudeMult[3] = {0.7182818284590452, 0.1415926535897931,
                                      0.6457513110645906};
constexpr double kColorJitter = 0.012;
constexpr double kAmpJitter = 0.02;

int severity_slot(int severity) {
    if (severity < 1 || severity > 5)
        throw std::invalid_argument("corruption severity must be in 1..5");
    return severity - 1;
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double frac(double x) { return x - std::floor(x); }

Image box_blur(const Image& img, int width) {
    const int r = width / 2;
    const int h = img.height;
    const int w = img.width;
    const int ph = h + 2 * r;
    const int pw = w + 2 * r;
    Image out = make_image(img.channels, h, w);
    std::vector<double> sat(static_cast<std::size_t>(ph + 1) * (pw + 1), 0.0);
    auto sat_at = [&](int y, int x) -> double& {
        return sat[static_cast<std::size_t>(y) * (pw + 1) + x];
    };
    for (int c = 0; c < img.channels; ++c) {
        // Summed-area table over the edge-replicated padding.
        for (int y = 0; y < ph; ++y) {
            const int sy = std::clamp(y - r, 0, h - 1);
            for (int x = 0; x < pw; ++x) {
                const int sx = std::clamp(x - r, 0, w - 1);
                sat_at(y + 1, x + 1) =
                    img.at(c, sy, sx) + sat_at(y, x + 1) + sat_at(y + 1, x) - sat_at(y, x);
            }
        }
        const double inv = 1.0 / (static_cast<double>(width) * width);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const double sum = sat_at(y + 2 * r + 1, x + 2 * r + 1) -
                                   sat_at(y, x + 2 * r + 1) - sat_at(y + 2 * r + 1, x) +
                                   sat_at(y, x);
                out.at(c, y, x) = sum * inv;
            }
    }
    return out;
}

}  // namespace

std::string to_string(CorruptionKind kind) {
    switch (kind) {
        case CorruptionKind::GaussianNoise: return "gaussian_noise";
        case CorruptionKind::Contrast: return "contrast";
        case CorruptionKind::Brightness: return "brightness";
        case CorruptionKind::BoxBlur: return "box_blur";
        case CorruptionKind::ImpulseNoise: return "impulse_noise";
    }
    throw std::invalid_argument("unknown corruption kind");
}

CorruptionKind corruption_from_string(const std::string& name) {
    if (name == "gaussian_noise") return CorruptionKind::GaussianNoise;
    if (name == "contrast") return CorruptionKind::Contrast;
    if (name == "brightness") return CorruptionKind::Brightness;
    if (name == "box_blur") return CorruptionKind::BoxBlur;
    if (name == "impulse_noise") return CorruptionKind::ImpulseNoise;
    throw std::invalid_argument("unknown corruption kind: " + name);
}

double gaussian_sigma(int severity) { return kSigma[severity_slot(severity)]; }
double contrast_scale(int severity) { return kContrast[severity_slot(severity)]; }
double brightness_shift(int severity) { return kBrightness[severity_slot(severity)]; }
int blur_width(int severity) { return kBlurWidth[severity_slot(severity)]; }
double impulse_rate(int severity) { return kImpulse[severity_slot(severity)]; }

bool operator==(const CorruptionSpec& a, const CorruptionSpec& b) {
    return a.kind == b.kind && a.severity == b.severity;
}

Image apply_corruption(const Image& img, const CorruptionSpec& spec, Rng& rng) {
    if (!img.valid()) throw std::invalid_argument("apply_corruption: invalid image");
    switch (spec.kind) {
        case CorruptionKind::GaussianNoise: {
            const double sigma = gaussian_sigma(spec.severity);
            Image out = img;
            for (double& v : out.data) v = clamp01(v + sigma * rng.normal());
            return out;
        }
        case CorruptionKind::Contrast: {
            const double scale = contrast_scale(spec.severity);
            Image out = img;
            for (double& v : out.data) v = 0.5 + scale * (v - 0.5);
            return out;
        }
        case CorruptionKind::Brightness: {
            const double shift = brightness_shift(spec.severity);
            Image out = img;
            for (double& v : out.data) v = clamp01(v + shift);
            return out;
        }
        case CorruptionKind::BoxBlur:
            return box_blur(img, blur_width(spec.severity));
        case CorruptionKind::ImpulseNoise: {
            const double rate = impulse_rate(spec.severity);
            Image out = img;
            for (double& v : out.data)
                if (rng.unit() < rate) v = rng.unit() < 0.5 ? 0.0 : 1.0;
            return out;
        }
    }
    throw std::invalid_argument("apply_corruption: unknown corruption kind");
}

std::vector<Segment> default_schedule() {
    const std::vector<CorruptionSpec> specs = {
        {CorruptionKind::GaussianNoise, 5}, {CorruptionKind::Contrast, 5},
        {CorruptionKind::Brightness, 4},    {CorruptionKind::Brightness, 1},
        {CorruptionKind::Brightness, 2},    {CorruptionKind::Brightness, 5},
        {CorruptionKind::Brightness, 1},    {CorruptionKind::Brightness, 2},
        {CorruptionKind::Brightness, 4},    {CorruptionKind::Brightness, 5},
    };
    std::vector<Segment> out;
    for (const auto& s : specs) out.push_back({s, 100});
    return out;
}

std::vector<Segment> clusterability_schedule() {
    const std::vector<CorruptionSpec> specs = {
        {CorruptionKind::Brightness, 4},    {CorruptionKind::Brightness, 5},
        {CorruptionKind::GaussianNoise, 5}, {CorruptionKind::Brightness, 1},
        {CorruptionKind::Brightness, 2},    {CorruptionKind::Contrast, 5},
    };
    std::vector<Segment> out;
    for (int cycle = 0; cycle < 25; ++cycle)
        for (const auto& s : specs) out.push_back({s, 2});
    return out;
}

Image render_class_image(const StreamConfig& cfg, int class_id, Rng& rng) {
    Image img = make_image(3, cfg.height, cfg.width);
    const int period = 4 + (class_id % 5) * 2;
    const int orientation = class_id % 3;

    double base[3];
    double amplitude[3];
    for (int c = 0; c < 3; ++c) {
        const double offset = frac(class_id * kPaletteMult[c]) - 0.5;
        base[c] = kPaletteCenter + cfg.class_spread * kPaletteRange[c] * offset +
                  rng.uniform(-kColorJitter, kColorJitter);
        amplitude[c] = 0.28 + 0.04 * frac(class_id * kAmplitudeMult[c]) +
                       rng.uniform(-kAmpJitter, kAmpJitter);
    }
    const int phase_y = static_cast<int>(rng.below(static_cast<std::uint64_t>(period)));
    const int phase_x = static_cast<int>(rng.below(static_cast<std::uint64_t>(period)));

    auto high = [&](int t, int phase) { return ((t + phase) % period) < period / 2; };
    for (int y = 0; y < cfg.height; ++y)
        for (int x = 0; x < cfg.width; ++x) {
            bool on = false;
            if (orientation == 0) on = high(y, phase_y);
            else if (orientation == 1) on = high(x, phase_x);
            else on = high(y, phase_y) != high(x, phase_x);
            const double s = on ? 0.5 : -0.5;
            for (int c = 0; c < 3; ++c)
                img.at(c, y, x) = clamp01(base[c] + amplitude[c] * s);
        }
    return img;
}

double make_uncertainty(int severity, int classes, Rng& rng) {
    severity_slot(severity);
    if (classes < 2) throw std::invalid_argument("make_uncertainty: classes must be >= 2");
    const double cap = std::log(static_cast<double>(classes));
    const double u = 0.6 * cap * severity / 5.0 + rng.laplace(0.2 * cap);
    return std::clamp(u, 0.0, cap);
}

std::vector<int> ptta_order(std::size_t total, int classes, double delta, Rng& rng) {
    if (classes < 1) throw std::invalid_argument("ptta_order: classes must be >= 1");
    if (delta <= 0.0) throw std::invalid_argument("ptta_order: delta must be positive");
    if (total == 0) return {};

    const std::size_t slots = std::max<std::size_t>(1, total / 256);
    std::vector<std::vector<int>> bucket(slots);

    // Equal per-class totals, remainder to the lowest class ids.
    for (int c = 0; c < classes; ++c) {
        std::size_t share = total / static_cast<std::size_t>(classes);
        if (static_cast<std::size_t>(c) < total % static_cast<std::size_t>(classes)) share += 1;
        if (share == 0) continue;

        const std::vector<double> w = rng.dirichlet(delta, slots);
        std::vector<std::size_t> count(slots, 0);
        std::vector<std::pair<double, std::size_t>> rem;
        std::size_t assigned = 0;
        for (std::size_t s = 0; s < slots; ++s) {
            const double exact = w[s] * static_cast<double>(share);
            count[s] = static_cast<std::size_t>(std::floor(exact));
            assigned += count[s];
            rem.push_back({exact - std::floor(exact), s});
        }
        std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;  // deterministic across platforms
        });
        for (std::size_t i = 0; assigned < share; ++i, ++assigned) count[rem[i].second] += 1;
        for (std::size_t s = 0; s < slots; ++s)
            for (std::size_t i = 0; i < count[s]; ++i) bucket[s].push_back(c);
    }

    std::vector<int> order;
    order.reserve(total);
    for (auto& b : bucket) {
        rng.shuffle(b);
        order.insert(order.end(), b.begin(), b.end());
    }
    return order;
}

Stream::Stream(StreamConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.classes < 2) throw std::invalid_argument("stream: classes must be >= 2");
    if (cfg_.images_per_class < 1)
        throw std::invalid_argument("stream: images_per_class must be >= 1");
    if (cfg_.height < 4 || cfg_.width < 4)
        throw std::invalid_argument("stream: images must be at least 4x4");
    if (cfg_.batch < 1) throw std::invalid_argument("stream: batch must be >= 1");
    if (cfg_.class_spread < 0.0) throw std::invalid_argument("stream: negative class_spread");
    if (cfg_.schedule.empty()) cfg_.schedule = default_schedule();

    for (const auto& seg : cfg_.schedule) {
        if (seg.steps < 1) throw std::invalid_argument("stream: segment steps must be >= 1");
        severity_slot(seg.corruption.severity);
        if (std::find(modes_.begin(), modes_.end(), seg.corruption) == modes_.end())
            modes_.push_back(seg.corruption);
        for (int s = 0; s < seg.steps; ++s)
            segment_of_step_.push_back(static_cast<int>(&seg - cfg_.schedule.data()));
        schedule_steps_ += seg.steps;
    }

    pool_.reserve(static_cast<std::size_t>(cfg_.classes) * cfg_.images_per_class);
    for (int c = 0; c < cfg_.classes; ++c)
        for (int j = 0; j < cfg_.images_per_class; ++j) {
            Rng rng(Rng::mix(cfg_.seed,
                             0xB00000ULL + static_cast<std::uint64_t>(c) * cfg_.images_per_class +
                                 static_cast<std::uint64_t>(j)));
            pool_.push_back(render_class_image(cfg_, c, rng));
        }

    Rng order_rng(Rng::mix(cfg_.seed, 0x0DDE12ULL));
    order_ = ptta_order(static_cast<std::size_t>(schedule_steps_) * cfg_.batch, cfg_.classes,
                        cfg_.dirichlet_delta, order_rng);
}

const Segment& Stream::segment_at(long step) const {
    if (step < 0) throw std::invalid_argument("stream: negative step");
    const long wrapped = step % schedule_steps_;
    return cfg_.schedule[static_cast<std::size_t>(segment_of_step_[wrapped])];
}

int Stream::mode_index_at(long step) const {
    const CorruptionSpec& spec = segment_at(step).corruption;
    const auto it = std::find(modes_.begin(), modes_.end(), spec);
    return static_cast<int>(it - modes_.begin());
}

Arrival Stream::make_arrival(std::int64_t global_index, const CorruptionSpec& spec) const {
    const std::size_t slot = static_cast<std::size_t>(global_index) % order_.size();
    const int class_id = order_[slot];
    const std::uint64_t g = static_cast<std::uint64_t>(global_index);
    const int instance =
        static_cast<int>(Rng::mix(cfg_.seed, 0xC4A55EULL ^ g) %
                         static_cast<std::uint64_t>(cfg_.images_per_class));
    Rng rng(Rng::mix(Rng::mix(cfg_.seed, 0xA221AA1ULL), g));

    const Image& base = pool_[static_cast<std::size_t>(class_id) * cfg_.images_per_class +
                              static_cast<std::size_t>(instance)];
    const Image corrupted = apply_corruption(base, spec, rng);

    Arrival a;
    a.descriptor = compute_descriptor(corrupted, cfg_.descriptor);
    a.uncertainty = make_uncertainty(spec.severity, cfg_.classes, rng);
    a.payload_ref = global_index;
    a.class_id = class_id;
    const auto it = std::find(modes_.begin(), modes_.end(), spec);
    a.mode_index = static_cast<int>(it - modes_.begin());
    return a;
}

StreamBatch Stream::batch(long step) const {
    StreamBatch out;
    out.step = step;
    out.corruption = segment_at(step).corruption;
    out.arrivals.reserve(static_cast<std::size_t>(cfg_.batch));
    for (int i = 0; i < cfg_.batch; ++i)
        out.arrivals.push_back(
            make_arrival(static_cast<std::int64_t>(step) * cfg_.batch + i, out.corruption));
    return out;
}

MemorySample Stream::to_sample(const Arrival& arrival) const {
    MemorySample s;
    s.descriptor = arrival.descriptor;
    s.payload_ref = arrival.payload_ref;
    s.uncertainty = arrival.uncertainty;
    s.diag_mode = arrival.mode_index;
    s.diag_class = arrival.class_id;
    return s;
}

Matrix Stream::balanced_reference(int per_mode, std::uint64_t salt) const {
    if (per_mode < 1) throw std::invalid_argument("balanced_reference: per_mode must be >= 1");
    Rng rng(Rng::mix(Rng::mix(cfg_.seed, 0xBA1A4CEDULL), salt));
    Matrix out;
    out.reserve(modes_.size() * static_cast<std::size_t>(per_mode));
    for (const auto& spec : modes_)
        for (int j = 0; j < per_mode; ++j) {
            const int class_id = static_cast<int>(rng.below(cfg_.classes));
            const int instance = static_cast<int>(rng.below(cfg_.images_per_class));
            const Image& base =
                pool_[static_cast<std::size_t>(class_id) * cfg_.images_per_class + instance];
            const Image corrupted = apply_corruption(base, spec, rng);
            out.push_back(compute_descriptor(corrupted, cfg_.descriptor).values);
        }
    return out;
}

const Image& Stream::pool_image(int class_id, int instance) const {
    if (class_id < 0 || class_id >= cfg_.classes || instance < 0 ||
        instance >= cfg_.images_per_class)
        throw std::invalid_argument("pool_image: index out of range");
    return pool_[static_cast<std::size_t>(class_id) * cfg_.images_per_class +
                 static_cast<std::size_t>(instance)];
}

}  // namespace mcm
