#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace linkbench {

using NodeId = std::uint32_t;

/// Raised on malformed input files (edge lists, manifests, CSV).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised on semantically invalid data (self-loops, empty graphs, bad ids).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a sampler cannot reach its edge target on the given graph.
class InfeasibleSample : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised on numeric failures (non-convergence, degenerate training sets).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unordered node pair stored in canonical order u < v.
struct NodePair {
    NodeId u;
    NodeId v;

    NodePair() : u(0), v(0) {}
    NodePair(NodeId a, NodeId b) : u(a < b ? a : b), v(a < b ? b : a) {
        if (a == b) throw DataError("NodePair: self-pair (" + std::to_string(a) + ")");
    }

    std::uint64_t key() const { return (std::uint64_t(u) << 32) | v; }
    friend bool operator==(const NodePair& a, const NodePair& b) { return a.key() == b.key(); }
    friend bool operator<(const NodePair& a, const NodePair& b) { return a.key() < b.key(); }
};

struct NodePairHash {
    std::size_t operator()(const NodePair& p) const {
        std::uint64_t x = p.key();
        x ^= x >> 33;
        x *= 0xff51afd7ed558ccdULL;
        x ^= x >> 33;
        return static_cast<std::size_t>(x);
    }
};

/// Set of canonical node pairs.
class EdgeSet {
public:
    EdgeSet() = default;

    bool insert(NodePair p) { return set_.insert(p).second; }
    bool erase(NodePair p) { return set_.erase(p) > 0; }
    bool contains(NodePair p) const { return set_.count(p) > 0; }
    std::size_t size() const { return set_.size(); }
    bool empty() const { return set_.empty(); }
    void clear() { set_.clear(); }

    auto begin() const { return set_.begin(); }
    auto end() const { return set_.end(); }

    /// Pairs in canonical sorted order (stable across runs).
    std::vector<NodePair> sorted() const;

    /// this \ other
    EdgeSet difference(const EdgeSet& other) const;

private:
    std::unordered_set<NodePair, NodePairHash> set_;
};

}  // namespace linkbench
