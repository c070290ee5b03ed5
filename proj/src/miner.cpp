#include "bpcheck/miner.hpp"

#include "bpcheck/declare.hpp"
#include "bpcheck/parallel.hpp"

#include <tuple>

namespace bpcheck
{

namespace
{

template < typename Sequences >
void mine_binary( ConstraintKind kind, const std::set< Label >& symbols, const Sequences& sequences,
                  const Label& scope, std::vector< MinedConstraint >& out )
{
    for ( const auto& a : symbols )
        for ( const auto& b : symbols )
        {
            if ( a == b )
                continue;
            for ( Template t : binary_templates )
                if ( holds_on_all( t, Binding{ a, b }, sequences ).minable() )
                    out.emplace_back( kind, t, ConstraintParams{ scope, a, b } );
        }
}

} // namespace

std::vector< MinedConstraint > mine_activity_constraints( const ProcessModel& model )
{
    std::vector< MinedConstraint > out;
    mine_binary( ConstraintKind::Activity, model.activities(), model.sequences(), {}, out );
    return out;
}

std::vector< MinedConstraint > mine_interobject_constraints( const ProcessModel& model, const LabelIndex& labels )
{
    std::set< Sequence > projected;
    for ( const auto& seq : model.sequences() )
        projected.insert( labels.object_projection( seq ) );
    std::vector< MinedConstraint > out;
    mine_binary( ConstraintKind::InterObject, labels.objects( model.activities() ), projected, {}, out );
    return out;
}

std::map< Label, std::vector< Sequence > > project_per_object( const std::set< Sequence >& sequences,
                                                               const std::set< Label >& objects,
                                                               const LabelIndex& labels )
{
    std::map< Label, std::vector< Sequence > > out;
    for ( const auto& o : objects )
    {
        auto& per = out[ o ];
        for ( const auto& seq : sequences )
            per.push_back( labels.action_projection( seq, o ) );
    }
    return out;
}

std::vector< MinedConstraint > mine_intraobject_constraints( const ProcessModel& model, const LabelIndex& labels )
{
    std::vector< MinedConstraint > out;
    const auto actions = labels.actions_per_object( model.activities() );
    std::set< Label > objects;
    for ( const auto& [ o, n ] : actions )
        objects.insert( o );

    for ( const auto& [ object, projections ] : project_per_object( model.sequences(), objects, labels ) )
    {
        std::set< Sequence > present;
        for ( const auto& p : projections )
            if ( !p.empty() )
                present.insert( p );
        if ( present.empty() )
            continue;

        const auto& n_o = actions.at( object );
        for ( const auto& n : n_o )
            for ( Template t : unary_templates )
                if ( holds_on_all( t, Binding{ n, {} }, present ).minable() )
                    out.emplace_back( ConstraintKind::IntraObject, t, ConstraintParams{ object, n, {} } );
        mine_binary( ConstraintKind::IntraObject, n_o, present, object, out );
    }
    return out;
}

std::vector< MinedConstraint > mine_role_constraints( const ProcessModel& model )
{
    std::vector< MinedConstraint > out;
    for ( const auto& [ a, r ] : model.role_map() )
        out.emplace_back( ConstraintKind::Role, Template::Absence, ConstraintParams{ {}, a, r } );
    return out;
}

std::vector< MinedConstraint > mine_model( const ProcessModel& model, const LabelIndex& labels )
{
    auto out = mine_activity_constraints( model );
    for ( auto&& part : { mine_interobject_constraints( model, labels ), mine_intraobject_constraints( model, labels ),
                          mine_role_constraints( model ) } )
        out.insert( out.end(), part.begin(), part.end() );
    return out;
}

std::optional< ConstraintKey > standardize_key( const ConstraintKey& key, const Lexicon& lex )
{
    ConstraintKey out = key;
    auto& p = out.params;
    switch ( key.kind )
    {
    case ConstraintKind::Activity:
        p.first = standardize_label( p.first, lex );
        p.second = standardize_label( p.second, lex );
        break;
    case ConstraintKind::InterObject:
        p.first = normalize_label( p.first );
        p.second = normalize_label( p.second );
        break;
    case ConstraintKind::IntraObject:
        p.scope = normalize_label( p.scope );
        p.first = standardize_action( p.first, lex );
        if ( !p.second.empty() )
            p.second = standardize_action( p.second, lex );
        break;
    case ConstraintKind::Role:
        p.first = standardize_label( p.first, lex );
        p.second = normalize_label( p.second );
        break;
    }
    if ( key.kind != ConstraintKind::Role && arity( key.templ ) == 2 && p.first == p.second )
        return std::nullopt;
    return out;
}

void ConstraintCollection::add( const ConstraintKey& key, const std::string& model_id )
{
    _provenance[ key ].insert( model_id );
}

void ConstraintCollection::add( const ConstraintKey& key, const std::set< std::string >& model_ids )
{
    _provenance[ key ].insert( model_ids.begin(), model_ids.end() );
}

std::uint32_t ConstraintCollection::support( const ConstraintKey& key ) const
{
    return static_cast< std::uint32_t >( provenance( key ).size() );
}

const std::set< std::string >& ConstraintCollection::provenance( const ConstraintKey& key ) const
{
    const auto it = _provenance.find( key );
    if ( it == _provenance.end() )
        throw std::out_of_range( "constraint not in collection: " + key.str() );
    return it->second;
}

std::vector< MinedConstraint > ConstraintCollection::constraints() const
{
    std::vector< MinedConstraint > out;
    out.reserve( _provenance.size() );
    for ( const auto& [ key, models ] : _provenance )
        out.emplace_back( key.kind, key.templ, key.params, static_cast< std::uint32_t >( models.size() ) );
    return out;
}

ConstraintCollection prune_subsumed( const ConstraintCollection& c )
{
    // Subsumption only relates constraints over the same (unordered) parameters and scope.
    using Bucket = std::tuple< ConstraintKind, Label, Label, Label >;
    std::map< Bucket, std::vector< const ConstraintKey* > > buckets;
    for ( const auto& [ key, models ] : c.entries() )
    {
        const auto& p = key.params;
        const auto [ lo, hi ] = std::minmax( p.first, p.second );
        buckets[ { key.kind, p.scope, lo, hi } ].push_back( &key );
    }

    ConstraintCollection out;
    for ( const auto& [ bucket, keys ] : buckets )
        for ( const auto* weak : keys )
        {
            const auto support = c.support( *weak );
            bool implied = false;
            for ( const auto* strong : keys )
            {
                if ( strong == weak || c.support( *strong ) != support )
                    continue;
                if ( subsumes( strong->templ, { strong->params.first, strong->params.second }, weak->templ,
                               { weak->params.first, weak->params.second } ) )
                {
                    implied = true;
                    break;
                }
            }
            if ( !implied )
                out.add( *weak, c.provenance( *weak ) );
        }
    return out;
}

ConstraintCollection refine_collection(
    const std::vector< std::pair< std::string, std::vector< MinedConstraint > > >& per_model, const Lexicon& lex )
{
    ConstraintCollection merged;
    for ( const auto& [ model_id, constraints ] : per_model )
        for ( const auto& c : constraints )
            if ( auto key = standardize_key( c.key(), lex ) )
                merged.add( *key, model_id );
    return prune_subsumed( merged );
}

ConstraintCollection mine_collection( const std::vector< ProcessModel >& models, const LabelIndex& labels, unsigned jobs )
{
    std::vector< std::pair< std::string, std::vector< MinedConstraint > > > per_model( models.size() );
    parallel_for( models.size(), jobs, [ & ]( std::size_t i ) {
        per_model[ i ] = { models[ i ].id(), mine_model( models[ i ], labels ) };
    } );
    return refine_collection( per_model, labels.lexicon() );
}

} // namespace bpcheck
