#pragma once

#include <memory>
#include <string>
#include <vector>

namespace cogevo {

// embed(text) -> fixed-length real vector. Implementations must be
// deterministic; the simulator caches outputs keyed by item id.
class TextEmbedder {
public:
    virtual ~TextEmbedder() = default;
    virtual std::vector<double> embed(const std::string& text) const = 0;
};

// Default: 64-bucket FNV-1a hashed bag-of-words, L2-normalized.
// Empty text maps to the zero vector.
class HashedBowEmbedder : public TextEmbedder {
public:
    static constexpr size_t kDim = 64;
    std::vector<double> embed(const std::string& text) const override;
};

// HTTP adapter: POST {"text": ...} -> {"vector": [...]} at <base_url>/embed.
// Excluded from acceptance runs; exists so an external embedding service
// can be swapped in from config.
class RemoteEmbedder : public TextEmbedder {
public:
    explicit RemoteEmbedder(std::string base_url);
    std::vector<double> embed(const std::string& text) const override;

private:
    std::string host_;
    int port_;
};

std::unique_ptr<TextEmbedder> make_embedder(const std::string& kind, const std::string& url);

} // namespace cogevo
