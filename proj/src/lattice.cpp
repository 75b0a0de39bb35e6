#include "qecforge/lattice.hpp"

#include "qecforge/errors.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <numeric>
#include <set>
#include <utility>

namespace qecforge {

namespace {

void append_u16(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void append_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

} // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

void CodeLattice::rebuild_counts_and_anchors() {
    const int nd = dart_count();
    std::int32_t vmax = -1, fmax = -1, emax = -1;
    for (int d = 0; d < nd; ++d) {
        vmax = std::max(vmax, vertex_[d]);
        fmax = std::max(fmax, face_[d]);
        emax = std::max(emax, edge_[d]);
    }
    n_vertices_ = vmax + 1;
    n_faces_ = fmax + 1;
    n_edges_ = emax + 1;
    vertex_dart_.assign(n_vertices_, -1);
    face_dart_.assign(n_faces_, -1);
    for (int d = 0; d < nd; ++d) {
        if (vertex_dart_[vertex_[d]] < 0) vertex_dart_[vertex_[d]] = d;
        if (face_dart_[face_[d]] < 0) face_dart_[face_[d]] = d;
    }
}

CodeLattice CodeLattice::torus_grid(int rows, int cols) {
    if (rows < 3 || cols < 3)
        throw InvariantViolation("torus grid requires rows >= 3 and cols >= 3: smaller wraps "
                                 "create double edges");
    CodeLattice L;
    const int V = rows * cols;
    const int E = 2 * V;
    const int nd = 2 * E;
    L.opposite_.resize(nd);
    L.next_.resize(nd);
    L.vertex_.resize(nd);
    L.face_.resize(nd);
    L.edge_.resize(nd);

    auto vid = [&](int r, int c) { return ((r + rows) % rows) * cols + ((c + cols) % cols); };
    auto h_edge = [&](int r, int c) { return ((r + rows) % rows) * cols + ((c + cols) % cols); };
    auto v_edge = [&](int r, int c) { return V + ((r + rows) % rows) * cols + ((c + cols) % cols); };

    for (int e = 0; e < E; ++e) {
        L.opposite_[2 * e] = 2 * e + 1;
        L.opposite_[2 * e + 1] = 2 * e;
        L.edge_[2 * e] = e;
        L.edge_[2 * e + 1] = e;
    }
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            // Darts at (r, c): east = tail of h(r,c), north = head of v(r-1,c),
            // west = head of h(r,c-1), south = tail of v(r,c).
            const Dart east = 2 * h_edge(r, c);
            const Dart north = 2 * v_edge(r - 1, c) + 1;
            const Dart west = 2 * h_edge(r, c - 1) + 1;
            const Dart south = 2 * v_edge(r, c);
            const int v = vid(r, c);
            L.vertex_[east] = v;
            L.vertex_[north] = v;
            L.vertex_[west] = v;
            L.vertex_[south] = v;
            // Counterclockwise rotation.
            L.next_[east] = north;
            L.next_[north] = west;
            L.next_[west] = south;
            L.next_[south] = east;
        }
    }
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            // The face orbit of the east dart at (r, c) traces the square
            // with corners (r,c), (r,c+1), (r+1,c+1), (r+1,c).
            const int f = r * cols + c;
            Dart d = 2 * h_edge(r, c);
            for (int s = 0; s < 4; ++s) {
                L.face_[d] = f;
                d = L.next_[L.opposite_[d]];
            }
        }
    }
    L.n_initial_ = E;
    L.rebuild_counts_and_anchors();
    L.validate();
    return L;
}

CodeLattice CodeLattice::dual() const {
    CodeLattice D;
    const int nd = dart_count();
    D.opposite_ = opposite_;
    D.edge_ = edge_;
    D.vertex_ = face_;
    D.face_ = vertex_;
    D.next_.resize(nd);
    for (int d = 0; d < nd; ++d) D.next_[d] = next_[opposite_[d]];
    D.n_initial_ = n_initial_;
    D.rebuild_counts_and_anchors();
    return D;
}

int CodeLattice::vertex_degree(int v) const {
    int deg = 0;
    const Dart start = vertex_dart_[v];
    Dart d = start;
    do {
        ++deg;
        d = next_[d];
    } while (d != start);
    return deg;
}

int CodeLattice::face_degree(int f) const {
    int deg = 0;
    const Dart start = face_dart_[f];
    Dart d = start;
    do {
        ++deg;
        d = next_[opposite_[d]];
    } while (d != start);
    return deg;
}

std::pair<int, int> CodeLattice::edge_vertices(int e) const {
    return {vertex_[2 * e], vertex_[2 * e + 1]};
}

std::pair<int, int> CodeLattice::edge_faces(int e) const {
    return {face_[2 * e], face_[2 * e + 1]};
}

std::vector<Dart> CodeLattice::rotation(int v) const {
    std::vector<Dart> rot;
    const Dart start = vertex_dart_[v];
    Dart d = start;
    do {
        rot.push_back(d);
        d = next_[d];
    } while (d != start);
    std::size_t best = 0;
    for (std::size_t i = 1; i < rot.size(); ++i)
        if (edge_[rot[i]] < edge_[rot[best]]) best = i;
    std::rotate(rot.begin(), rot.begin() + best, rot.end());
    return rot;
}

namespace {

// Face-pair adjacency of a lattice, addressed by label pair.
class FaceAdjacency {
public:
    explicit FaceAdjacency(const CodeLattice& L) : n_(L.face_count()), bits_(std::size_t(n_) * n_, false) {
        for (int e = 0; e < L.edge_count(); ++e) {
            auto [f1, f2] = L.edge_faces(e);
            bits_[std::size_t(f1) * n_ + f2] = true;
            bits_[std::size_t(f2) * n_ + f1] = true;
        }
    }
    bool adjacent(int a, int b) const { return bits_[std::size_t(a) * n_ + b]; }

private:
    int n_;
    std::vector<bool> bits_;
};

// All legal splits of vertices of `view`, emitted with the given d flag.
void enumerate_splits(const CodeLattice& view, std::uint8_t dflag, std::vector<Action>& out) {
    const FaceAdjacency adj(view);
    std::vector<int> fdeg(view.face_count());
    for (int f = 0; f < view.face_count(); ++f) fdeg[f] = view.face_degree(f);

    std::vector<Action> local;
    for (int v = 0; v < view.vertex_count(); ++v) {
        const std::vector<Dart> rot = view.rotation(v);
        const int k = static_cast<int>(rot.size());
        if (k < 4) continue; // both offspring need degree >= 3
        std::vector<int> corner(k);
        for (int t = 0; t < k; ++t) corner[t] = view.face_of(rot[(t + 1) % k]);

        local.clear();
        std::set<std::pair<int, int>> seen;
        for (int i = 0; i < k; ++i) {
            for (int j = i + 1; j < k; ++j) {
                const int arc1 = j - i;
                const int arc2 = k - arc1;
                if (arc1 < 2 || arc2 < 2) continue;
                int p1 = corner[i], p2 = corner[j];
                if (p1 == p2) continue;
                if (p1 > p2) std::swap(p1, p2);
                if (!seen.insert({p1, p2}).second) continue;
                if (fdeg[p1] > 7 || fdeg[p2] > 7) continue; // new edge raises both by one
                if (adj.adjacent(p1, p2)) continue;         // would be a dual double edge
                local.push_back(Action{dflag, v, p1, p2});
            }
        }
        std::sort(local.begin(), local.end());
        out.insert(out.end(), local.begin(), local.end());
    }
}

} // namespace

// Performs the dart surgery of a vertex split; the only code that mutates a
// lattice in place.
class LatticeSurgeon {
public:
    // Splits vertex a.v of L between the corners at faces a.p1 and a.p2.
    // Throws with the violated constraint if the split is illegal.
    static CodeLattice split_vertex(const CodeLattice& L, const Action& a);
};

CodeLattice LatticeSurgeon::split_vertex(const CodeLattice& L, const Action& a) {
    if (a.v < 0 || a.v >= L.vertex_count()) throw InvariantViolation("split: unknown vertex label");
    if (a.p1 < 0 || a.p1 >= L.face_count() || a.p2 < 0 || a.p2 >= L.face_count())
        throw InvariantViolation("split: unknown face label");
    if (a.p1 == a.p2) throw InvariantViolation("split: faces must be distinct");

    const std::vector<Dart> rot = L.rotation(a.v);
    const int k = static_cast<int>(rot.size());
    if (k < 4)
        throw InvariantViolation("split: vertex degree below 4, offspring would drop under degree 3");
    if (L.face_degree(a.p1) > 7 || L.face_degree(a.p2) > 7)
        throw InvariantViolation("split: face degree bound of 8 would be exceeded");
    for (int e = 0; e < L.edge_count(); ++e) {
        auto [f1, f2] = L.edge_faces(e);
        if ((f1 == a.p1 && f2 == a.p2) || (f1 == a.p2 && f2 == a.p1))
            throw InvariantViolation("split: faces already adjacent, edge would double on the dual");
    }

    std::vector<int> corner(k);
    for (int t = 0; t < k; ++t) corner[t] = L.face_of(rot[(t + 1) % k]);

    int ci = -1, cj = -1;
    for (int i = 0; i < k && ci < 0; ++i) {
        for (int j = i + 1; j < k; ++j) {
            const int arc1 = j - i;
            if (arc1 < 2 || k - arc1 < 2) continue;
            const bool hit = (corner[i] == a.p1 && corner[j] == a.p2) ||
                             (corner[i] == a.p2 && corner[j] == a.p1);
            if (hit) {
                ci = i;
                cj = j;
                break;
            }
        }
    }
    if (ci < 0)
        throw InvariantViolation("split: faces are not separable corners of the vertex rotation");

    CodeLattice out = L;
    const int new_vertex = out.n_vertices_;
    const int new_edge = out.n_edges_;
    const Dart d_keep = 2 * new_edge;    // stays with the retained label
    const Dart d_new = 2 * new_edge + 1; // belongs to the new vertex

    // The wrapping arc rot[cj+1..ci] contains rot[0], the dart with the
    // smallest edge id, and keeps the label; arc rot[ci+1..cj] moves.
    out.opposite_.push_back(d_new);
    out.opposite_.push_back(d_keep);
    out.next_.resize(d_new + 1);
    out.vertex_.resize(d_new + 1);
    out.face_.resize(d_new + 1);
    out.edge_.resize(d_new + 1);

    for (int t = ci + 1; t <= cj; ++t) out.vertex_[rot[t]] = new_vertex;
    out.vertex_[d_keep] = a.v;
    out.vertex_[d_new] = new_vertex;
    out.face_[d_keep] = corner[ci];
    out.face_[d_new] = corner[cj];
    out.edge_[d_keep] = new_edge;
    out.edge_[d_new] = new_edge;

    out.next_[rot[ci]] = d_keep;
    out.next_[d_keep] = rot[(cj + 1) % k];
    out.next_[rot[cj]] = d_new;
    out.next_[d_new] = rot[ci + 1];

    out.rebuild_counts_and_anchors();
    return out;
}

std::vector<Action> CodeLattice::enumerate_actions() const {
    std::vector<Action> out;
    enumerate_splits(*this, 0, out);
    enumerate_splits(dual(), 1, out);
    return out;
}

CodeLattice CodeLattice::apply(const Action& a) const {
    CodeLattice grown = (a.d == 0) ? LatticeSurgeon::split_vertex(*this, a)
                                   : LatticeSurgeon::split_vertex(dual(), a).dual();
    grown.validate();
    return grown;
}

void CodeLattice::validate() const {
    const int nd = dart_count();
    if (nd == 0) throw InvariantViolation("lattice has no darts");
    if (nd % 2 != 0) throw InvariantViolation("odd dart count");
    if (static_cast<int>(next_.size()) != nd || static_cast<int>(vertex_.size()) != nd ||
        static_cast<int>(face_.size()) != nd || static_cast<int>(edge_.size()) != nd)
        throw InvariantViolation("dart array sizes disagree");

    for (Dart d = 0; d < nd; ++d) {
        const Dart o = opposite_[d];
        if (o < 0 || o >= nd || o == d || opposite_[o] != d)
            throw InvariantViolation("opposite is not a fixed-point-free involution");
        if (edge_[o] != edge_[d]) throw InvariantViolation("edge id differs across an edge's darts");
        if (next_[d] < 0 || next_[d] >= nd) throw InvariantViolation("next out of range");
    }
    {
        std::vector<int> indeg(nd, 0);
        for (Dart d = 0; d < nd; ++d) indeg[next_[d]]++;
        for (Dart d = 0; d < nd; ++d)
            if (indeg[d] != 1) throw InvariantViolation("next is not a permutation");
    }
    // Edge ids partition darts into pairs 0..E-1.
    {
        std::vector<int> per_edge(n_edges_, 0);
        for (Dart d = 0; d < nd; ++d) {
            if (edge_[d] < 0 || edge_[d] >= n_edges_) throw InvariantViolation("edge id out of range");
            per_edge[edge_[d]]++;
        }
        for (int e = 0; e < n_edges_; ++e)
            if (per_edge[e] != 2) throw InvariantViolation("edge id not carried by exactly two darts");
    }
    // Vertex orbits: one orbit per label, label constant along the orbit.
    {
        std::vector<char> seen(nd, 0);
        for (int v = 0; v < n_vertices_; ++v) {
            const Dart start = vertex_dart_[v];
            if (start < 0) throw InvariantViolation("vertex label with no darts");
            Dart d = start;
            do {
                if (seen[d]) throw InvariantViolation("vertex orbits overlap");
                seen[d] = 1;
                if (vertex_[d] != v) throw InvariantViolation("vertex label changes along a rotation");
                d = next_[d];
            } while (d != start);
        }
        for (Dart d = 0; d < nd; ++d)
            if (!seen[d]) throw InvariantViolation("dart not reached by its vertex anchor");
    }
    // Face orbits, under the induced face permutation.
    {
        std::vector<char> seen(nd, 0);
        for (int f = 0; f < n_faces_; ++f) {
            const Dart start = face_dart_[f];
            if (start < 0) throw InvariantViolation("face label with no darts");
            Dart d = start;
            do {
                if (seen[d]) throw InvariantViolation("face orbits overlap");
                seen[d] = 1;
                if (face_[d] != f) throw InvariantViolation("face label changes along its orbit");
                d = next_[opposite_[d]];
            } while (d != start);
        }
        for (Dart d = 0; d < nd; ++d)
            if (!seen[d]) throw InvariantViolation("dart not reached by its face anchor");
    }
    if (n_vertices_ - n_edges_ + n_faces_ != 0)
        throw InvariantViolation("Euler characteristic differs from 0: not a torus embedding");

    for (int v = 0; v < n_vertices_; ++v) {
        const int deg = vertex_degree(v);
        if (deg < 3 || deg > 8) throw InvariantViolation("vertex degree outside [3, 8]");
    }
    for (int f = 0; f < n_faces_; ++f) {
        const int deg = face_degree(f);
        if (deg < 3 || deg > 8) throw InvariantViolation("face degree outside [3, 8]");
    }

    {
        std::set<std::pair<int, int>> prim, dua;
        for (int e = 0; e < n_edges_; ++e) {
            auto [u, v] = edge_vertices(e);
            if (u == v) throw InvariantViolation("self-loop on the primal graph");
            if (!prim.insert(std::minmax(u, v)).second)
                throw InvariantViolation("double edge on the primal graph");
            auto [f, g] = edge_faces(e);
            if (f == g) throw InvariantViolation("self-loop on the dual graph");
            if (!dua.insert(std::minmax(f, g)).second)
                throw InvariantViolation("double edge on the dual graph");
        }
    }

    auto connected = [&](int count, auto label_of) {
        std::vector<char> vis(count, 0);
        std::vector<int> stack{0};
        vis[0] = 1;
        int reached = 1;
        while (!stack.empty()) {
            const int x = stack.back();
            stack.pop_back();
            for (int e = 0; e < n_edges_; ++e) {
                auto [u, v] = label_of(e);
                int other = -1;
                if (u == x) other = v;
                else if (v == x) other = u;
                if (other >= 0 && !vis[other]) {
                    vis[other] = 1;
                    ++reached;
                    stack.push_back(other);
                }
            }
        }
        return reached == count;
    };
    if (!connected(n_vertices_, [&](int e) { return edge_vertices(e); }))
        throw InvariantViolation("primal graph is disconnected");
    if (!connected(n_faces_, [&](int e) { return edge_faces(e); }))
        throw InvariantViolation("dual graph is disconnected");
}

namespace {

void encode_section(const CodeLattice& view, std::string& out) {
    std::string section;
    append_u32(section, static_cast<std::uint32_t>(view.vertex_count()));
    std::vector<int> canon(view.edge_count(), -1);
    int next_id = 0;
    for (int v = 0; v < view.vertex_count(); ++v) {
        const std::vector<Dart> rot = view.rotation(v);
        append_u16(section, static_cast<std::uint32_t>(rot.size()));
        for (Dart d : rot) {
            int& c = canon[view.edge_of(d)];
            if (c < 0) c = next_id++;
            append_u16(section, static_cast<std::uint32_t>(c));
        }
    }
    append_u32(out, static_cast<std::uint32_t>(section.size()));
    out += section;
}

} // namespace

Percept CodeLattice::percept() const {
    Percept p;
    encode_section(*this, p.bytes);
    encode_section(dual(), p.bytes);
    p.digest = fnv1a64(p.bytes);
    return p;
}

CodeLattice CodeLattice::from_raw(std::vector<Dart> opposite, std::vector<Dart> next,
                                  std::vector<std::int32_t> vertex, std::vector<std::int32_t> face,
                                  std::vector<std::int32_t> edge, int n_initial) {
    CodeLattice L;
    L.opposite_ = std::move(opposite);
    L.next_ = std::move(next);
    L.vertex_ = std::move(vertex);
    L.face_ = std::move(face);
    L.edge_ = std::move(edge);
    L.n_initial_ = n_initial;
    L.rebuild_counts_and_anchors();
    return L;
}

std::vector<std::uint64_t> census_counts(const CodeLattice& root, int depth) {
    std::vector<std::uint64_t> counts(depth + 1, 0);
    counts[0] = 1;
    struct Walker {
        std::vector<std::uint64_t>& counts;
        int depth;
        void walk(const CodeLattice& lat, int level) {
            const std::vector<Action> actions = lat.enumerate_actions();
            if (level + 1 <= depth) counts[level + 1] += actions.size();
            if (level + 1 >= depth) return;
            for (const Action& a : actions) walk(lat.apply(a), level + 1);
        }
    } w{counts, depth};
    if (depth > 0) w.walk(root, 0);
    return counts;
}

} // namespace qecforge
