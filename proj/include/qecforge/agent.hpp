#pragma once

#include "qecforge/lattice.hpp"
#include "qecforge/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace qecforge {

struct PsHyper {
    double beta = 2.0;   // softmax inverse temperature
    double eta = 0.05;   // glow decay
    double gamma = 0.01; // forgetting, pulls h back toward 1
    double delta = 0.01; // deletion margin over the h floor
    int tau = 30;        // rewarded interactions before a clip may be deleted
    // glow persists across trials by default (it decays anyway); set to wipe
    // it at every trial boundary instead
    bool reset_glow_between_trials = false;
};

// Two-layer projective-simulation memory. Percept clips hold the canonical
// lattice encodings; each carries its available deformations with one
// h-weight and one glow value per edge. Transition probabilities follow the
// softmax of h at inverse temperature beta.
class ClipNetwork {
public:
    explicit ClipNetwork(PsHyper hyper = {}) : hyper_(hyper) {}

    // Index of the clip for this percept, creating it (h = 1, g = 0) when
    // unseen. The first percept ever seen fixes the reference action count
    // M_0 used by glow. Throws on an empty action set.
    int perceive(const Percept& percept, std::span<const Action> available, std::int64_t trial);

    // Samples an action index from the softmax policy and marks the traversed
    // edge's glow with M_i / M_0.
    int select_action(int clip, PhiloxStream& rng);

    // One interaction step: h += reward * g + gamma * (1 - h), floored at 1,
    // then g *= 1 - eta, on every edge of the network.
    void update(double reward);

    // Trial bookkeeping: an unrewarded trial deletes the clips it created; a
    // rewarded one bumps every clip's rewarded-interaction count. Then any
    // deletable clip (count past tau, mean h under 1 + delta) is dropped.
    // The root clip is never deleted.
    void end_trial(bool rewarded, std::int64_t trial);

    std::vector<double> policy(int clip) const;
    int action_count(int clip) const;
    const Action& action_at(int clip, int j) const;
    double h_value(int clip, int j) const;
    double glow_value(int clip, int j) const;
    bool alive(int clip) const { return clips_[clip].alive; }
    int clip_count() const { return static_cast<int>(clips_.size()); }
    int alive_count() const;
    int root_action_count() const { return m0_; }
    std::int64_t created_trial(int clip) const { return clips_[clip].created_trial; }
    int rewarded_since_creation(int clip) const { return clips_[clip].rewarded_since; }

    const PsHyper& hyper() const { return hyper_; }
    void set_hyper(const PsHyper& h) { hyper_ = h; }

    void save(std::ostream& out) const;
    static ClipNetwork load(std::istream& in);

private:
    struct Clip {
        std::string bytes;
        std::uint64_t digest = 0;
        std::vector<Action> actions;
        std::vector<double> h, g;
        std::int64_t created_trial = 0;
        int rewarded_since = 0;
        bool alive = true;
    };

    void erase_clip(int idx);

    std::vector<Clip> clips_;
    std::unordered_map<std::string, int> index_;
    std::vector<int> created_this_trial_;
    PsHyper hyper_;
    int m0_ = 0;
};

} // namespace qecforge
