#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace feynhopf {

/// Undirected multigraph with labelled vertices, labelled edges (self-loops allowed)
/// and labelled dangling legs. Isomorphism classes of these are what the algebra
/// layer needs to compare.
struct LabeledMultigraph {
    std::vector<std::string> vertex_labels;
    std::vector<std::tuple<std::size_t, std::size_t, std::string>> edges;
    std::vector<std::pair<std::size_t, std::string>> legs;
};

namespace detail {

inline std::vector<int> rank_signatures(const std::vector<std::string>& sig) {
    std::vector<std::string> sorted = sig;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> out(sig.size());
    for (std::size_t i = 0; i < sig.size(); ++i)
        out[i] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), sig[i]) - sorted.begin());
    return out;
}

class Canonicalizer {
public:
    explicit Canonicalizer(const LabeledMultigraph& g) : g_(g), n_(g.vertex_labels.size()), adj_(n_) {
        std::vector<std::string> labels;
        for (const auto& [u, v, l] : g.edges) labels.push_back(l);
        for (const auto& [v, l] : g.legs) labels.push_back(l);
        std::sort(labels.begin(), labels.end());
        labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
        auto label_id = [&](const std::string& l) {
            return static_cast<int>(std::lower_bound(labels.begin(), labels.end(), l) - labels.begin());
        };
        for (const auto& [u, v, l] : g.edges) {
            int id = label_id(l);
            adj_[u].push_back({v, id});
            adj_[v].push_back({u, id});
        }
        std::vector<std::string> sig(n_);
        std::vector<std::vector<std::string>> leg_labels(n_);
        for (const auto& [v, l] : g.legs) leg_labels[v].push_back(l);
        for (std::size_t v = 0; v < n_; ++v) {
            std::sort(leg_labels[v].begin(), leg_labels[v].end());
            std::string s = g.vertex_labels[v] + '\x1f';
            for (const auto& l : leg_labels[v]) s += l + '\x1e';
            sig[v] = s;
        }
        initial_ = rank_signatures(sig);
    }

    std::string run() {
        if (n_ == 0) return encode({});
        search(refine(initial_));
        return *best_;
    }

private:
    std::vector<int> refine(std::vector<int> colors) const {
        std::size_t classes = count_classes(colors);
        for (;;) {
            std::vector<std::string> sig(n_);
            for (std::size_t v = 0; v < n_; ++v) {
                std::vector<std::pair<int, int>> nb;
                nb.reserve(adj_[v].size());
                for (const auto& [w, l] : adj_[v]) nb.emplace_back(l, colors[w]);
                std::sort(nb.begin(), nb.end());
                std::string s = std::to_string(colors[v]) + ':';
                for (const auto& [l, c] : nb) s += std::to_string(l) + ',' + std::to_string(c) + ';';
                sig[v] = s;
            }
            auto next = rank_signatures(sig);
            std::size_t next_classes = count_classes(next);
            if (next_classes == classes) return next;
            colors = std::move(next);
            classes = next_classes;
        }
    }

    static std::size_t count_classes(const std::vector<int>& colors) {
        std::vector<int> c = colors;
        std::sort(c.begin(), c.end());
        return static_cast<std::size_t>(std::unique(c.begin(), c.end()) - c.begin());
    }

    void search(const std::vector<int>& colors) {
        // colors are ranks 0..k-1; pick the first class with more than one member
        std::map<int, std::vector<std::size_t>> cells;
        for (std::size_t v = 0; v < n_; ++v) cells[colors[v]].push_back(v);
        const std::vector<std::size_t>* target = nullptr;
        for (const auto& [c, members] : cells)
            if (members.size() > 1) {
                target = &members;
                break;
            }
        if (!target) {
            std::vector<std::size_t> pos(n_);
            for (std::size_t v = 0; v < n_; ++v) pos[v] = static_cast<std::size_t>(colors[v]);
            std::string enc = encode(pos);
            if (!best_ || enc < *best_) best_ = std::move(enc);
            return;
        }
        for (std::size_t chosen : *target) {
            std::vector<std::string> sig(n_);
            for (std::size_t v = 0; v < n_; ++v)
                sig[v] = std::to_string(colors[v] * 2 + ((colors[v] == colors[chosen] && v != chosen) ? 1 : 0)) +
                         "#";
            // string ranking of zero-padded integers keeps the numeric order
            for (auto& s : sig) s = std::string(12 - std::min<std::size_t>(12, s.size()), '0') + s;
            search(refine(rank_signatures(sig)));
        }
    }

    std::string encode(const std::vector<std::size_t>& pos) const {
        std::vector<std::string> vl(n_);
        for (std::size_t v = 0; v < n_; ++v) vl[pos[v]] = g_.vertex_labels[v];
        std::vector<std::tuple<std::size_t, std::size_t, std::string>> es;
        for (const auto& [u, v, l] : g_.edges) {
            auto a = pos[u], b = pos[v];
            if (a > b) std::swap(a, b);
            es.emplace_back(a, b, l);
        }
        std::sort(es.begin(), es.end());
        std::vector<std::pair<std::size_t, std::string>> ls;
        for (const auto& [v, l] : g_.legs) ls.emplace_back(pos[v], l);
        std::sort(ls.begin(), ls.end());
        std::string out = "V";
        for (const auto& l : vl) out += "(" + l + ")";
        out += "E";
        for (const auto& [a, b, l] : es) out += "(" + std::to_string(a) + "-" + std::to_string(b) + ":" + l + ")";
        out += "L";
        for (const auto& [a, l] : ls) out += "(" + std::to_string(a) + ":" + l + ")";
        return out;
    }

    const LabeledMultigraph& g_;
    std::size_t n_;
    std::vector<std::vector<std::pair<std::size_t, int>>> adj_;
    std::vector<int> initial_;
    std::optional<std::string> best_;
};

}  // namespace detail

/// Isomorphism-invariant encoding: equal strings iff the labelled multigraphs are
/// isomorphic. Colour refinement plus individualisation, minimum over all leaves.
inline std::string canonical_form(const LabeledMultigraph& g) { return detail::Canonicalizer(g).run(); }

}  // namespace feynhopf
