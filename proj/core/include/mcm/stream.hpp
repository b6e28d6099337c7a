#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcm/descriptor.hpp"
#include "mcm/gmm.hpp"
#include "mcm/image.hpp"
#include "mcm/memory.hpp"
#include "mcm/rng.hpp"

namespace mcm {

// Synthetic corrupted-image stream. A fixed pool of procedural class images
// (striped and checkered color patterns) is replayed under a schedule of
// corruption segments; every arrival is an image re-corrupted on the fly,
// reduced to a descriptor, and tagged with a severity-driven uncertainty
// score. Batches are addressable by step index: the same (config, seed, step)
// always yields byte-identical arrivals regardless of visit order.

enum class CorruptionKind { GaussianNoise, Contrast, Brightness, BoxBlur, ImpulseNoise };

std::string to_string(CorruptionKind kind);
CorruptionKind corruption_from_string(const std::string& name);

// Severity tables, severity in 1..5. Each table is monotone in its raw
// parameter; brightness sweeps from strong darkening to strong brightening.
double gaussian_sigma(int severity);     // additive noise stddev
double contrast_scale(int severity);     // multiplier on (x - 0.5), decreasing
double brightness_shift(int severity);   // additive offset, increasing
int blur_width(int severity);            // odd box filter width
double impulse_rate(int severity);       // per-value salt/pepper probability

struct CorruptionSpec {
    CorruptionKind kind = CorruptionKind::Brightness;
    int severity = 3;  // 1..5
};

bool operator==(const CorruptionSpec& a, const CorruptionSpec& b);

// Applies one corruption. Outputs stay in [0, 1]. Stochastic kinds draw from
// rng in a fixed channel-major, row-major order.
Image apply_corruption(const Image& img, const CorruptionSpec& spec, Rng& rng);

struct Segment {
    CorruptionSpec corruption;
    int steps = 0;
};

struct StreamConfig {
    int classes = 100;
    int images_per_class = 20;
    int height = 32;
    int width = 32;
    int batch = 64;
    double class_spread = 1.0;     // scales the palette offsets between classes
    double dirichlet_delta = 0.25; // class burstiness; smaller is burstier
    DescriptorKind descriptor = DescriptorKind::ChannelStats;
    std::vector<Segment> schedule;
    std::uint64_t seed = 0;
};

// Ten segments of 100 steps over six distinct modes. Heavy noise and low
// contrast open the run and never return; the four brightness modes follow
// and each recurs once in the back half.
std::vector<Segment> default_schedule();

// Six modes cycling with a two-step dwell, 25 cycles (300 steps). Intended
// with batch = 8 to probe how many modes a sliding window can resolve.
std::vector<Segment> clusterability_schedule();

// Procedural class image: palette color plus a striped or checkered pattern,
// with per-instance phase and color jitter drawn from rng.
Image render_class_image(const StreamConfig& cfg, int class_id, Rng& rng);

// Severity-driven uncertainty in [0, ln(classes)]: a linear ramp in severity
// plus Laplace noise, clamped to the valid range.
double make_uncertainty(int severity, int classes, Rng& rng);

// Bursty class arrival order: every class gets an equal share of the total,
// spread over time slots by a Dirichlet draw (largest-remainder rounding),
// then shuffled within each slot.
std::vector<int> ptta_order(std::size_t total, int classes, double delta, Rng& rng);

struct Arrival {
    Descriptor descriptor;
    double uncertainty = 0.0;
    std::int64_t payload_ref = 0;  // global arrival index
    int mode_index = 0;            // index into distinct_modes()
    int class_id = 0;
};

struct StreamBatch {
    long step = 0;
    CorruptionSpec corruption;
    std::vector<Arrival> arrivals;
};

class Stream {
  public:
    explicit Stream(StreamConfig cfg);

    // Steps covered by one pass of the schedule; batches past the end repeat it.
    long schedule_steps() const { return schedule_steps_; }
    const StreamConfig& config() const { return cfg_; }

    const std::vector<CorruptionSpec>& distinct_modes() const { return modes_; }
    int mode_index_at(long step) const;
    const Segment& segment_at(long step) const;

    StreamBatch batch(long step) const;

    // Converts a sampled arrival into a memory sample; ids are assigned by the
    // caller.
    MemorySample to_sample(const Arrival& arrival) const;

    // Equal-sized draws from every distinct mode, for use as a balanced
    // comparison set in distribution distances. Rows are descriptor values.
    Matrix balanced_reference(int per_mode, std::uint64_t salt) const;

    const Image& pool_image(int class_id, int instance) const;

  private:
    StreamConfig cfg_;
    std::vector<Image> pool_;
    std::vector<int> order_;              // arrival classes, one schedule pass
    std::vector<CorruptionSpec> modes_;   // distinct, in order of first use
    std::vector<int> segment_of_step_;    // per step within one pass
    long schedule_steps_ = 0;

    Arrival make_arrival(std::int64_t global_index, const CorruptionSpec& spec) const;
};

}  // namespace mcm
