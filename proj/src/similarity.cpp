#include "bpcheck/similarity.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace bpcheck
{

namespace
{

std::vector< Label > words( const Label& phrase )
{
    std::vector< Label > out;
    std::istringstream in( phrase );
    for ( Label w; in >> w; )
        out.push_back( std::move( w ) );
    return out;
}

std::map< std::string, double > trigrams( const Label& phrase )
{
    const std::string padded = " " + phrase + " ";
    std::map< std::string, double > out;
    for ( std::size_t i = 0; i + 3 <= padded.size(); ++i )
        out[ padded.substr( i, 3 ) ] += 1.0;
    return out;
}

} // namespace

double lexical_similarity( std::string_view raw1, std::string_view raw2 )
{
    const auto x1 = normalize_label( raw1 );
    const auto x2 = normalize_label( raw2 );
    if ( x1 == x2 )
        return 1.0;
    if ( x1.empty() || x2.empty() )
        return 0.0;

    const auto w1 = words( x1 );
    const auto w2 = words( x2 );
    const std::set< Label > s1( w1.begin(), w1.end() );
    const std::set< Label > s2( w2.begin(), w2.end() );
    std::size_t shared = 0;
    for ( const auto& w : s1 )
        shared += s2.count( w );
    const double dice = 2.0 * static_cast< double >( shared ) / static_cast< double >( s1.size() + s2.size() );

    const auto t1 = trigrams( x1 );
    const auto t2 = trigrams( x2 );
    double dot = 0.0, n1 = 0.0, n2 = 0.0;
    for ( const auto& [ g, c ] : t1 )
    {
        n1 += c * c;
        if ( const auto it = t2.find( g ); it != t2.end() )
            dot += c * it->second;
    }
    for ( const auto& [ g, c ] : t2 )
        n2 += c * c;
    const double cosine = dot / std::sqrt( n1 * n2 );

    return std::clamp( 0.5 * dice + 0.5 * cosine, 0.0, 1.0 );
}

double clamped_cosine( const std::vector< double >& u, const std::vector< double >& v )
{
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for ( std::size_t i = 0; i < std::min( u.size(), v.size() ); ++i )
    {
        dot += u[ i ] * v[ i ];
        nu += u[ i ] * u[ i ];
        nv += v[ i ] * v[ i ];
    }
    if ( nu == 0.0 || nv == 0.0 )
        return 0.0;
    return std::clamp( dot / std::sqrt( nu * nv ), 0.0, 1.0 );
}

double SimilarityProvider::sim( std::string_view raw1, std::string_view raw2 ) const
{
    auto x1 = normalize_label( raw1 );
    auto x2 = normalize_label( raw2 );
    if ( x1 == x2 )
        return 1.0;
    if ( x2 < x1 )
        std::swap( x1, x2 );
    auto key = std::make_pair( std::move( x1 ), std::move( x2 ) );
    {
        std::lock_guard lock( _mutex );
        if ( const auto it = _cache.find( key ); it != _cache.end() )
            return it->second;
    }
    const double score = std::clamp( compute( key.first, key.second ), 0.0, 1.0 );
    std::lock_guard lock( _mutex );
    return _cache.emplace( std::move( key ), score ).first->second;
}

double LexicalSimilarity::compute( const Label& x1, const Label& x2 ) const { return lexical_similarity( x1, x2 ); }

VectorFileSimilarity::VectorFileSimilarity( std::map< Label, std::vector< double > > vectors )
    : _vectors{ std::move( vectors ) }
{
    for ( const auto& [ phrase, v ] : _vectors )
    {
        if ( _dim == 0 )
            _dim = v.size();
        if ( v.size() != _dim || _dim == 0 )
            throw SimilarityError( "vector for '" + phrase + "' has dimension " + std::to_string( v.size() ) +
                                   ", expected " + std::to_string( _dim ) );
    }
}

std::unique_ptr< VectorFileSimilarity > VectorFileSimilarity::load( const std::filesystem::path& path )
{
    std::ifstream in( path );
    if ( !in )
        throw SimilarityError( "cannot read vector file " + path.string() );
    std::map< Label, std::vector< double > > vectors;
    std::string line;
    for ( std::size_t number = 1; std::getline( in, line ); ++number )
    {
        if ( !line.empty() && line.back() == '\r' )
            line.pop_back();
        if ( line.empty() )
            continue;
        const auto tab = line.find( '\t' );
        if ( tab == std::string::npos )
            throw SimilarityError( path.string() + ":" + std::to_string( number ) + ": expected phrase<TAB>vector" );
        std::vector< double > v;
        std::istringstream values( line.substr( tab + 1 ) );
        for ( std::string tok; values >> tok; )
        {
            char* end = nullptr;
            const double d = std::strtod( tok.c_str(), &end );
            if ( end != tok.c_str() + tok.size() )
                throw SimilarityError( path.string() + ":" + std::to_string( number ) + ": bad number '" + tok + "'" );
            v.push_back( d );
        }
        vectors[ normalize_label( line.substr( 0, tab ) ) ] = std::move( v );
    }
    try
    {
        return std::make_unique< VectorFileSimilarity >( std::move( vectors ) );
    }
    catch ( const SimilarityError& e )
    {
        throw SimilarityError( path.string() + ": " + e.what() );
    }
}

std::optional< std::vector< double > > VectorFileSimilarity::vector_of( const Label& phrase ) const
{
    if ( const auto it = _vectors.find( phrase ); it != _vectors.end() )
        return it->second;
    std::vector< double > sum( _dim, 0.0 );
    std::size_t found = 0;
    for ( const auto& w : words( phrase ) )
        if ( const auto it = _vectors.find( w ); it != _vectors.end() )
        {
            for ( std::size_t i = 0; i < _dim; ++i )
                sum[ i ] += it->second[ i ];
            ++found;
        }
    if ( found == 0 )
        return std::nullopt;
    for ( auto& s : sum )
        s /= static_cast< double >( found );
    return sum;
}

double VectorFileSimilarity::compute( const Label& x1, const Label& x2 ) const
{
    const auto v1 = vector_of( x1 );
    const auto v2 = vector_of( x2 );
    if ( !v1 || !v2 )
        return lexical_similarity( x1, x2 );
    return clamped_cosine( *v1, *v2 );
}

RemoteSimilarity::RemoteSimilarity( RemoteOptions opts )
    : _opts{ std::move( opts ) }, _slots{ std::clamp< std::ptrdiff_t >( _opts.max_in_flight, 1, 64 ) }
{
    const auto& url = _opts.endpoint;
    const auto scheme_end = url.find( "://" );
    if ( scheme_end == std::string::npos || ( url.compare( 0, scheme_end, "http" ) != 0 &&
                                              url.compare( 0, scheme_end, "https" ) != 0 ) )
        throw SimilarityError( "embedding endpoint must be an http(s) URL: '" + url + "'" );
    const auto path_start = url.find( '/', scheme_end + 3 );
    _host = url.substr( 0, path_start );
    _path = path_start == std::string::npos ? "/" : url.substr( path_start );
}

std::vector< std::vector< double > > RemoteSimilarity::fetch( const std::vector< Label >& phrases ) const
{
    _slots.acquire();
    struct Release
    {
        std::counting_semaphore< 64 >& s;
        ~Release() { s.release(); }
    } release{ _slots };

    httplib::Client client( _host );
    const auto secs = std::chrono::duration_cast< std::chrono::seconds >( _opts.timeout );
    const auto usecs = std::chrono::duration_cast< std::chrono::microseconds >( _opts.timeout - secs );
    client.set_connection_timeout( secs.count(), usecs.count() );
    client.set_read_timeout( secs.count(), usecs.count() );
    client.set_write_timeout( secs.count(), usecs.count() );

    const nlohmann::json request{ { "phrases", phrases } };
    const auto response = client.Post( _path, request.dump(), "application/json" );
    if ( !response )
        throw SimilarityError( "embedding request to " + _opts.endpoint + " failed: " + httplib::to_string( response.error() ) );
    if ( response->status != 200 )
        throw SimilarityError( "embedding service " + _opts.endpoint + " answered HTTP " + std::to_string( response->status ) );

    try
    {
        const auto body = nlohmann::json::parse( response->body );
        auto vectors = body.at( "vectors" ).get< std::vector< std::vector< double > > >();
        if ( vectors.size() != phrases.size() )
            throw SimilarityError( "embedding service returned " + std::to_string( vectors.size() ) + " vectors for " +
                                   std::to_string( phrases.size() ) + " phrases" );
        return vectors;
    }
    catch ( const nlohmann::json::exception& e )
    {
        throw SimilarityError( std::string( "malformed embedding response: " ) + e.what() );
    }
}

void RemoteSimilarity::prefetch( const std::vector< Label >& raw ) const
{
    std::vector< Label > missing;
    {
        std::lock_guard lock( _vectors_mutex );
        for ( const auto& r : raw )
        {
            auto p = normalize_label( r );
            if ( !_vectors.contains( p ) && std::find( missing.begin(), missing.end(), p ) == missing.end() )
                missing.push_back( std::move( p ) );
        }
    }
    if ( missing.empty() )
        return;
    auto vectors = fetch( missing );
    std::lock_guard lock( _vectors_mutex );
    for ( std::size_t i = 0; i < missing.size(); ++i )
        _vectors.emplace( missing[ i ], std::move( vectors[ i ] ) );
}

std::vector< double > RemoteSimilarity::vector_of( const Label& phrase ) const
{
    prefetch( { phrase } );
    std::lock_guard lock( _vectors_mutex );
    return _vectors.at( phrase );
}

double RemoteSimilarity::compute( const Label& x1, const Label& x2 ) const
{
    prefetch( { x1, x2 } );
    return clamped_cosine( vector_of( x1 ), vector_of( x2 ) );
}

std::unique_ptr< SimilarityProvider > make_provider( const ProviderConfig& cfg )
{
    std::string endpoint = cfg.endpoint;
    if ( const char* env = std::getenv( "BPCHECK_EMBED_ENDPOINT" ); env && *env )
        endpoint = env;
    if ( !endpoint.empty() )
        return std::make_unique< RemoteSimilarity >( RemoteOptions{ endpoint, cfg.timeout, cfg.max_in_flight } );
    if ( !cfg.vectors.empty() )
        return VectorFileSimilarity::load( cfg.vectors );
    return std::make_unique< LexicalSimilarity >();
}

} // namespace bpcheck
