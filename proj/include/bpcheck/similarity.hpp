#pragma once

#include "bpcheck/model.hpp"

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

namespace bpcheck
{

/// Raised when a provider cannot produce a score (I/O, timeout, bad response).
/// Distinct from a low score, which simply means "no match".
class SimilarityError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// 0.5 * token Dice + 0.5 * cosine of character-trigram counts over the space-padded phrases.
[[nodiscard]] double lexical_similarity( std::string_view x1, std::string_view x2 );

/// Cosine of two equal-length vectors clamped to [0, 1]; zero vectors score 0.
[[nodiscard]] double clamped_cosine( const std::vector< double >& u, const std::vector< double >& v );

/// Phrase similarity in [0, 1]. Scores are cached per normalized, order-independent pair, so
/// lookups are symmetric and deterministic. Identical normalized phrases always score 1.
class SimilarityProvider
{
    mutable std::mutex _mutex;
    mutable std::map< std::pair< Label, Label >, double > _cache;

protected:
    /// Called with normalized, distinct phrases.
    [[nodiscard]] virtual double compute( const Label& x1, const Label& x2 ) const = 0;

public:
    virtual ~SimilarityProvider() = default;

    [[nodiscard]] virtual std::string name() const = 0;
    [[nodiscard]] double sim( std::string_view x1, std::string_view x2 ) const;
    [[nodiscard]] bool match( std::string_view x_model, std::string_view x_log, double epsilon ) const
    {
        return sim( x_model, x_log ) > epsilon;
    }
};

class LexicalSimilarity final : public SimilarityProvider
{
protected:
    [[nodiscard]] double compute( const Label& x1, const Label& x2 ) const override;

public:
    [[nodiscard]] std::string name() const override { return "lexical"; }
};

/// Vectors read from `phrase<TAB>v1 v2 ... vd`. A phrase without a stored vector uses the
/// average of its word vectors; if none of its words is stored, the pair falls back to lexical.
class VectorFileSimilarity final : public SimilarityProvider
{
    std::map< Label, std::vector< double > > _vectors;
    std::size_t _dim = 0;

    [[nodiscard]] std::optional< std::vector< double > > vector_of( const Label& phrase ) const;

protected:
    [[nodiscard]] double compute( const Label& x1, const Label& x2 ) const override;

public:
    /// Throws SimilarityError on unreadable files, malformed lines or inconsistent dimensions.
    [[nodiscard]] static std::unique_ptr< VectorFileSimilarity > load( const std::filesystem::path& path );
    explicit VectorFileSimilarity( std::map< Label, std::vector< double > > vectors );

    [[nodiscard]] std::string name() const override { return "vectors"; }
    [[nodiscard]] std::size_t dimension() const { return _dim; }
    [[nodiscard]] const std::map< Label, std::vector< double > >& vectors() const { return _vectors; }
};

struct RemoteOptions
{
    std::string endpoint; // e.g. http://localhost:8080/embed
    std::chrono::milliseconds timeout{ 5000 };
    std::ptrdiff_t max_in_flight = 4;
};

/// Embeddings fetched over HTTP: POST {"phrases":[...]} answered by {"vectors":[[...],...]}.
class RemoteSimilarity final : public SimilarityProvider
{
    RemoteOptions _opts;
    std::string _host;
    std::string _path;
    mutable std::counting_semaphore< 64 > _slots;
    mutable std::mutex _vectors_mutex;
    mutable std::map< Label, std::vector< double > > _vectors;

    [[nodiscard]] std::vector< std::vector< double > > fetch( const std::vector< Label >& phrases ) const;
    [[nodiscard]] std::vector< double > vector_of( const Label& phrase ) const;

protected:
    [[nodiscard]] double compute( const Label& x1, const Label& x2 ) const override;

public:
    /// Throws SimilarityError if the endpoint is not an http(s) URL.
    explicit RemoteSimilarity( RemoteOptions opts );

    [[nodiscard]] std::string name() const override { return "remote"; }
    /// Fetches and caches vectors for many phrases in one request.
    void prefetch( const std::vector< Label >& phrases ) const;
};

struct ProviderConfig
{
    std::filesystem::path vectors;  // vector-file mode when set
    std::string endpoint;           // remote mode when set
    std::chrono::milliseconds timeout{ 5000 };
    std::ptrdiff_t max_in_flight = 4;
};

/// Remote when an endpoint is configured (BPCHECK_EMBED_ENDPOINT overrides it), else vector file
/// when a path is set, else lexical.
[[nodiscard]] std::unique_ptr< SimilarityProvider > make_provider( const ProviderConfig& cfg );

} // namespace bpcheck
