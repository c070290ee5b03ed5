#include "bpcheck/selector.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace bpcheck
{

void SelectionConfig::use_top_k( std::size_t k )
{
    for ( auto& r : per_kind )
        r = { Strategy::TopK, k, r.tau };
}

void SelectionConfig::use_threshold( double tau )
{
    for ( auto& r : per_kind )
        r = { Strategy::Threshold, r.k, tau };
}

void SelectionConfig::validate() const
{
    const auto unit = []( double x ) { return x >= 0.0 && x <= 1.0; };
    if ( !unit( epsilon.activity ) || !unit( epsilon.object ) || !unit( epsilon.role ) )
        throw std::invalid_argument( "epsilon must lie in [0, 1]" );
    if ( !unit( omega ) )
        throw std::invalid_argument( "omega must lie in [0, 1]" );
    for ( ConstraintKind kind : all_kinds )
    {
        const auto& r = rule( kind );
        if ( r.strategy == Strategy::TopK && r.k < 1 )
            throw std::invalid_argument( "k must be at least 1 for " + std::string( to_string( kind ) ) );
        if ( r.strategy == Strategy::Threshold && !unit( r.tau ) )
            throw std::invalid_argument( "tau must lie in [0, 1] for " + std::string( to_string( kind ) ) );
    }
    if ( mcs_size_cap < 1 )
        throw std::invalid_argument( "MCS size cap must be at least 1" );
}

bool ReviewFilter::excludes( const ConstraintKey& key, const LabelIndex& labels ) const
{
    const auto activity_excluded = [ & ]( const Label& a ) {
        if ( activities.contains( a ) )
            return true;
        for ( const auto& p : labels.pairs( a ) )
            if ( objects.contains( p.object ) || ( p.action && actions.contains( *p.action ) ) )
                return true;
        return false;
    };
    const auto& p = key.params;
    switch ( key.kind )
    {
    case ConstraintKind::Activity:
        return activity_excluded( p.first ) || activity_excluded( p.second );
    case ConstraintKind::InterObject:
        return objects.contains( p.first ) || objects.contains( p.second );
    case ConstraintKind::IntraObject:
        return objects.contains( p.scope ) || actions.contains( p.first ) ||
               ( !p.second.empty() && actions.contains( p.second ) );
    case ConstraintKind::Role:
        return activity_excluded( p.first ) || roles.contains( p.second );
    }
    return false;
}

void ReviewFilter::validate( const LabelIndex& labels ) const
{
    for ( const auto& pin : pinned )
    {
        const auto key = ConstraintKey::parse( pin );
        if ( excludes( key, labels ) )
            throw ModelError( "pinned constraint '" + pin + "' is also excluded by the filter" );
    }
}

namespace
{

struct Candidate
{
    Label log_component;
    double score;
};

// Log-side components matching a model component, memoized per component.
class Matcher
{
    const SimilarityProvider& _provider;
    const std::set< Label >& _pool;
    double _epsilon;
    std::map< Label, std::vector< Candidate > > _memo;

public:
    Matcher( const SimilarityProvider& provider, const std::set< Label >& pool, double epsilon )
        : _provider{ provider }, _pool{ pool }, _epsilon{ epsilon }
    {
    }

    const std::vector< Candidate >& operator()( const Label& model_component )
    {
        if ( const auto it = _memo.find( model_component ); it != _memo.end() )
            return it->second;
        std::vector< Candidate > out;
        for ( const auto& x : _pool )
        {
            const double s = _provider.sim( model_component, x );
            if ( s > _epsilon )
                out.push_back( { x, s } );
        }
        return _memo.emplace( model_component, std::move( out ) ).first->second;
    }
};

bool better_fit( const FittedConstraint& a, const FittedConstraint& b )
{
    if ( a.average_similarity() != b.average_similarity() )
        return a.average_similarity() > b.average_similarity();
    if ( a.support != b.support )
        return a.support > b.support;
    return a.source.str() < b.source.str();
}

bool ranks_before( const FittedConstraint& a, const FittedConstraint& b )
{
    if ( a.relevance != b.relevance )
        return a.relevance > b.relevance;
    if ( a.support != b.support )
        return a.support > b.support;
    return a.key.str() < b.key.str();
}

} // namespace

std::vector< FittedConstraint > fit_constraints( const std::vector< MinedConstraint >& mined, const EventLog& log,
                                                 const SelectionConfig& config, const SimilarityProvider& provider,
                                                 const LabelIndex& labels )
{
    const auto log_activities = activities_of( log );
    const auto log_roles = roles_of( log );
    const auto log_objects = labels.objects( log_activities );
    const auto log_actions = labels.actions_per_object( log_activities );
    const auto& lex = labels.lexicon();

    if ( const auto* remote = dynamic_cast< const RemoteSimilarity* >( &provider ) )
    {
        std::vector< Label > phrases( log_activities.begin(), log_activities.end() );
        phrases.insert( phrases.end(), log_objects.begin(), log_objects.end() );
        phrases.insert( phrases.end(), log_roles.begin(), log_roles.end() );
        for ( const auto& c : mined )
            for ( const auto* x : { &c.params().scope, &c.params().first, &c.params().second } )
                if ( !x->empty() )
                    phrases.push_back( *x );
        remote->prefetch( phrases );
    }

    Matcher match_activity( provider, log_activities, config.epsilon.activity );
    Matcher match_object( provider, log_objects, config.epsilon.object );
    Matcher match_role( provider, log_roles, config.epsilon.role );

    std::map< ConstraintKey, FittedConstraint > fitted;
    const auto emit = [ & ]( const MinedConstraint& source, ConstraintParams params, std::vector< SimilarityEntry > sim ) {
        FittedConstraint f;
        f.source = source.key();
        f.key = { source.kind(), source.templ(), std::move( params ) };
        f.support = source.support();
        f.sim = std::move( sim );
        auto [ it, inserted ] = fitted.try_emplace( f.key, f );
        if ( !inserted && better_fit( f, it->second ) )
            it->second = std::move( f );
    };

    for ( const auto& c : mined )
    {
        const auto& p = c.params();
        switch ( c.kind() )
        {
        case ConstraintKind::Activity:
        case ConstraintKind::InterObject: {
            auto& matcher = c.kind() == ConstraintKind::Activity ? match_activity : match_object;
            const auto firsts = matcher( p.first );
            const auto seconds = matcher( p.second );
            for ( const auto& x1 : firsts )
                for ( const auto& x2 : seconds )
                    if ( x1.log_component != x2.log_component )
                        emit( c, { {}, x1.log_component, x2.log_component },
                              { { p.first, x1.log_component, x1.score }, { p.second, x2.log_component, x2.score } } );
            break;
        }
        case ConstraintKind::IntraObject:
            for ( const auto& o : match_object( p.scope ) )
            {
                const auto it = log_actions.find( o.log_component );
                if ( it == log_actions.end() )
                    continue;
                const std::vector< SimilarityEntry > sim{ { p.scope, o.log_component, o.score } };
                for ( const auto& n1 : it->second )
                {
                    if ( !syn( p.first, n1, lex ) )
                        continue;
                    if ( c.unary() )
                    {
                        emit( c, { o.log_component, n1, {} }, sim );
                        continue;
                    }
                    for ( const auto& n2 : it->second )
                        if ( n1 != n2 && syn( p.second, n2, lex ) )
                            emit( c, { o.log_component, n1, n2 }, sim );
                }
            }
            break;
        case ConstraintKind::Role: {
            const auto activities = match_activity( p.first );
            const auto roles = match_role( p.second );
            for ( const auto& a : activities )
                for ( const auto& r : roles )
                    emit( c, { {}, a.log_component, r.log_component },
                          { { p.first, a.log_component, a.score }, { p.second, r.log_component, r.score } } );
            break;
        }
        }
    }

    std::vector< FittedConstraint > out;
    out.reserve( fitted.size() );
    for ( auto& [ key, f ] : fitted )
        out.push_back( std::move( f ) );
    return out;
}

double relevance( const FittedConstraint& c, const std::vector< FittedConstraint >& all, double omega )
{
    std::uint32_t max_support = 0;
    for ( const auto& other : all )
        if ( other.kind() == c.kind() )
            max_support = std::max( max_support, other.support );
    if ( max_support == 0 )
        throw std::invalid_argument( "constraint is not a member of the fitted set" );
    return omega * c.average_similarity() +
           ( 1.0 - omega ) * static_cast< double >( c.support ) / static_cast< double >( max_support );
}

void score_relevance( std::vector< FittedConstraint >& constraints, double omega )
{
    std::array< std::uint32_t, 4 > max_support{};
    for ( const auto& c : constraints )
    {
        auto& m = max_support[ static_cast< std::size_t >( c.kind() ) ];
        m = std::max( m, c.support );
    }
    for ( auto& c : constraints )
        c.relevance = omega * c.average_similarity() +
                      ( 1.0 - omega ) * static_cast< double >( c.support ) /
                          static_cast< double >( max_support[ static_cast< std::size_t >( c.kind() ) ] );
}

std::vector< FittedConstraint > select( const std::vector< FittedConstraint >& constraints, const SelectionConfig& config )
{
    std::vector< FittedConstraint > out;
    for ( ConstraintKind kind : all_kinds )
    {
        std::vector< FittedConstraint > ranked;
        for ( const auto& c : constraints )
            if ( c.kind() == kind )
                ranked.push_back( c );
        std::sort( ranked.begin(), ranked.end(), ranks_before );

        const auto& rule = config.rule( kind );
        if ( rule.strategy == Strategy::TopK )
        {
            if ( ranked.size() > rule.k )
                ranked.resize( rule.k );
        }
        else
            std::erase_if( ranked, [ & ]( const FittedConstraint& c ) { return !( c.relevance > rule.tau ); } );
        out.insert( out.end(), ranked.begin(), ranked.end() );
    }
    return out;
}

std::vector< FittedConstraint > apply_review( const std::vector< FittedConstraint >& constraints,
                                              const ReviewFilter& filter, const LabelIndex& labels )
{
    std::vector< FittedConstraint > out;
    for ( const auto& c : constraints )
        if ( filter.is_pinned( c.key ) || !filter.excludes( c.key, labels ) )
            out.push_back( c );
    return out;
}

std::optional< std::pair< ConstraintKind, Label > > consistency_scope( const ConstraintKey& key )
{
    if ( key.kind == ConstraintKind::Role )
        return std::nullopt;
    return std::make_pair( key.kind, key.params.scope );
}

RepairResult ensure_consistency( const std::vector< FittedConstraint >& constraints, const SelectionConfig& config,
                                 const ReviewFilter& filter )
{
    std::map< std::pair< ConstraintKind, Label >, std::vector< std::size_t > > groups;
    for ( std::size_t i = 0; i < constraints.size(); ++i )
        if ( auto scope = consistency_scope( constraints[ i ].key ) )
            groups[ *scope ].push_back( i );

    RepairResult result;
    std::vector< bool > removed( constraints.size(), false );

    for ( auto& [ scope, members ] : groups )
    {
        const std::string scope_name =
            std::string( to_string( scope.first ) ) + ( scope.second.empty() ? "" : " '" + scope.second + "'" );
        while ( true )
        {
            std::vector< TemplateInstance > group;
            std::vector< std::size_t > pinned;
            for ( std::size_t j = 0; j < members.size(); ++j )
            {
                const auto& key = constraints[ members[ j ] ].key;
                group.push_back( { key.templ, key.params.first, key.params.second } );
                if ( filter.is_pinned( key ) )
                    pinned.push_back( j );
            }

            CorrectionSearch search;
            try
            {
                if ( is_consistent( group, config.consistency ) )
                    break;
                search = minimal_correction_sets( group, config.mcs_size_cap, pinned, config.consistency );
            }
            catch ( const ConsistencyLimitError& e )
            {
                result.diagnostics.push_back( "unresolved " + scope_name + " group: " + e.what() );
                break;
            }
            if ( search.sets.empty() )
            {
                result.diagnostics.push_back( "unresolved " + scope_name + " group: " +
                                              search.diagnostic.value_or( "no correction set within the size cap" ) );
                break;
            }

            const auto cost = [ & ]( const CorrectionSet& s ) {
                double total = 0.0;
                for ( auto j : s )
                    total += constraints[ members[ j ] ].relevance;
                return total;
            };
            const auto keys_of = [ & ]( const CorrectionSet& s ) {
                std::vector< std::string > keys;
                for ( auto j : s )
                    keys.push_back( constraints[ members[ j ] ].key.str() );
                std::sort( keys.begin(), keys.end() );
                return keys;
            };
            const auto& best = *std::min_element( search.sets.begin(), search.sets.end(),
                                                  [ & ]( const CorrectionSet& a, const CorrectionSet& b ) {
                                                      const double ca = cost( a ), cb = cost( b );
                                                      if ( ca != cb )
                                                          return ca < cb;
                                                      if ( a.size() != b.size() )
                                                          return a.size() < b.size();
                                                      return keys_of( a ) < keys_of( b );
                                                  } );

            std::vector< std::size_t > kept;
            for ( std::size_t j = 0; j < members.size(); ++j )
            {
                if ( std::find( best.begin(), best.end(), j ) != best.end() )
                {
                    removed[ members[ j ] ] = true;
                    result.removed.push_back( constraints[ members[ j ] ].key );
                }
                else
                    kept.push_back( members[ j ] );
            }
            members = std::move( kept );
        }
    }

    for ( std::size_t i = 0; i < constraints.size(); ++i )
        if ( !removed[ i ] )
            result.constraints.push_back( constraints[ i ] );
    return result;
}

} // namespace bpcheck
