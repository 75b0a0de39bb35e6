#include "qecforge/agent.hpp"

#include "qecforge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace qecforge {

int ClipNetwork::perceive(const Percept& percept, std::span<const Action> available,
                          std::int64_t trial) {
    if (available.empty())
        throw InvariantViolation("terminal percept: no actions available, the trial must end");
    if (auto it = index_.find(percept.bytes); it != index_.end()) return it->second;

    Clip c;
    c.bytes = percept.bytes;
    c.digest = percept.digest;
    c.actions.assign(available.begin(), available.end());
    c.h.assign(available.size(), 1.0);
    c.g.assign(available.size(), 0.0);
    c.created_trial = trial;
    const int idx = static_cast<int>(clips_.size());
    clips_.push_back(std::move(c));
    index_.emplace(clips_.back().bytes, idx);
    created_this_trial_.push_back(idx);
    if (m0_ == 0) m0_ = static_cast<int>(available.size());
    return idx;
}

int ClipNetwork::select_action(int clip, PhiloxStream& rng) {
    Clip& c = clips_[clip];
    const std::size_t m = c.h.size();
    double hmax = c.h[0];
    for (double v : c.h) hmax = std::max(hmax, v);
    double total = 0.0;
    std::vector<double> w(m);
    for (std::size_t j = 0; j < m; ++j) {
        w[j] = std::exp(hyper_.beta * (c.h[j] - hmax));
        total += w[j];
    }
    const double u = rng.next_double() * total;
    double cum = 0.0;
    std::size_t pick = m - 1;
    for (std::size_t j = 0; j < m; ++j) {
        cum += w[j];
        if (u < cum) {
            pick = j;
            break;
        }
    }
    c.g[pick] = static_cast<double>(m) / static_cast<double>(m0_);
    return static_cast<int>(pick);
}

void ClipNetwork::update(double reward) {
    const double gamma = hyper_.gamma;
    const double keep = 1.0 - hyper_.eta;
    for (Clip& c : clips_) {
        if (!c.alive) continue;
        double* h = c.h.data();
        double* g = c.g.data();
        const std::size_t m = c.h.size();
        for (std::size_t j = 0; j < m; ++j) {
            double v = h[j] + reward * g[j] + gamma * (1.0 - h[j]);
            h[j] = v < 1.0 ? 1.0 : v;
            g[j] *= keep;
        }
    }
}

void ClipNetwork::erase_clip(int idx) {
    Clip& c = clips_[idx];
    index_.erase(c.bytes);
    c.alive = false;
    c.bytes.clear();
    c.bytes.shrink_to_fit();
    c.actions.clear();
    c.actions.shrink_to_fit();
    c.h.clear();
    c.h.shrink_to_fit();
    c.g.clear();
    c.g.shrink_to_fit();
}

void ClipNetwork::end_trial(bool rewarded, std::int64_t trial) {
    (void)trial;
    if (!rewarded) {
        for (int idx : created_this_trial_)
            if (idx != 0 && clips_[idx].alive) erase_clip(idx); // the root clip survives
    } else {
        for (Clip& c : clips_)
            if (c.alive) c.rewarded_since++;
    }
    for (std::size_t idx = 1; idx < clips_.size(); ++idx) { // clip 0 is the root
        Clip& c = clips_[idx];
        if (!c.alive || c.rewarded_since <= hyper_.tau) continue;
        const double mean = std::accumulate(c.h.begin(), c.h.end(), 0.0) / c.h.size();
        if (mean < 1.0 + hyper_.delta) erase_clip(static_cast<int>(idx));
    }
    if (hyper_.reset_glow_between_trials)
        for (Clip& c : clips_)
            if (c.alive) std::fill(c.g.begin(), c.g.end(), 0.0);
    created_this_trial_.clear();
}

std::vector<double> ClipNetwork::policy(int clip) const {
    const Clip& c = clips_[clip];
    std::vector<double> p(c.h.size());
    double hmax = c.h[0];
    for (double v : c.h) hmax = std::max(hmax, v);
    double total = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        p[j] = std::exp(hyper_.beta * (c.h[j] - hmax));
        total += p[j];
    }
    for (double& v : p) v /= total;
    return p;
}

int ClipNetwork::action_count(int clip) const { return static_cast<int>(clips_[clip].actions.size()); }
const Action& ClipNetwork::action_at(int clip, int j) const { return clips_[clip].actions[j]; }
double ClipNetwork::h_value(int clip, int j) const { return clips_[clip].h[j]; }
double ClipNetwork::glow_value(int clip, int j) const { return clips_[clip].g[j]; }

int ClipNetwork::alive_count() const {
    int n = 0;
    for (const Clip& c : clips_) n += c.alive ? 1 : 0;
    return n;
}

namespace {

std::string hex_encode(std::string_view bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(2 * bytes.size());
    for (unsigned char b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 15]);
    }
    return out;
}

std::string hex_decode(const std::string& hex) {
    std::string out;
    out.reserve(hex.size() / 2);
    auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        throw ConfigError("bad hex digit in snapshot");
    };
    for (std::size_t i = 0; i + 1 < hex.size(); i += 2)
        out.push_back(static_cast<char>((nib(hex[i]) << 4) | nib(hex[i + 1])));
    return out;
}

} // namespace

void ClipNetwork::save(std::ostream& out) const {
    out << "clip-network v1\n";
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%a", v);
        out << buf;
    };
    out << "hyper beta ";
    put(hyper_.beta);
    out << " eta ";
    put(hyper_.eta);
    out << " gamma ";
    put(hyper_.gamma);
    out << " delta ";
    put(hyper_.delta);
    out << " tau " << hyper_.tau << " m0 " << m0_ << "\n";
    out << "clips " << alive_count() << "\n";
    for (const Clip& c : clips_) {
        if (!c.alive) continue;
        out << "clip created " << c.created_trial << " rewarded " << c.rewarded_since << " actions "
            << c.actions.size() << " bytes " << hex_encode(c.bytes) << "\n";
        for (std::size_t j = 0; j < c.actions.size(); ++j) {
            const Action& a = c.actions[j];
            out << "  a " << int(a.d) << " " << a.v << " " << a.p1 << " " << a.p2 << " h ";
            put(c.h[j]);
            out << " g ";
            put(c.g[j]);
            out << "\n";
        }
    }
}

ClipNetwork ClipNetwork::load(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "clip-network v1")
        throw ConfigError("not a clip-network v1 snapshot");
    ClipNetwork net;
    std::string tok;
    {
        std::getline(in, line);
        std::istringstream ls(line);
        std::string beta_s, eta_s, gamma_s, delta_s;
        ls >> tok >> tok >> beta_s >> tok >> eta_s >> tok >> gamma_s >> tok >> delta_s;
        net.hyper_.beta = std::strtod(beta_s.c_str(), nullptr);
        net.hyper_.eta = std::strtod(eta_s.c_str(), nullptr);
        net.hyper_.gamma = std::strtod(gamma_s.c_str(), nullptr);
        net.hyper_.delta = std::strtod(delta_s.c_str(), nullptr);
        ls >> tok >> net.hyper_.tau >> tok >> net.m0_;
    }
    std::size_t n_clips = 0;
    {
        std::getline(in, line);
        std::istringstream ls(line);
        ls >> tok >> n_clips;
        if (tok != "clips") throw ConfigError("snapshot missing clip count");
    }
    for (std::size_t i = 0; i < n_clips; ++i) {
        std::getline(in, line);
        std::istringstream ls(line);
        Clip c;
        std::size_t n_actions = 0;
        std::string hex;
        ls >> tok >> tok >> c.created_trial >> tok >> c.rewarded_since >> tok >> n_actions >> tok >> hex;
        c.bytes = hex_decode(hex);
        c.digest = fnv1a64(c.bytes);
        c.actions.resize(n_actions);
        c.h.resize(n_actions);
        c.g.resize(n_actions);
        for (std::size_t j = 0; j < n_actions; ++j) {
            std::getline(in, line);
            std::istringstream as(line);
            int d;
            std::string h_s, g_s;
            as >> tok >> d >> c.actions[j].v >> c.actions[j].p1 >> c.actions[j].p2 >> tok >> h_s >>
                tok >> g_s;
            c.actions[j].d = static_cast<std::uint8_t>(d);
            c.h[j] = std::strtod(h_s.c_str(), nullptr);
            c.g[j] = std::strtod(g_s.c_str(), nullptr);
        }
        const int idx = static_cast<int>(net.clips_.size());
        net.clips_.push_back(std::move(c));
        net.index_.emplace(net.clips_.back().bytes, idx);
    }
    return net;
}

} // namespace qecforge
