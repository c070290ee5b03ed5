#include "bpcheck/synthetic.hpp"

#include "bpcheck/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <functional>
#include <random>

namespace bpcheck
{

WorkflowNet to_workflow_net( const ProcessTree& tree )
{
    WorkflowNet net;
    const auto place = [ & ] {
        net.places.push_back( "p" + std::to_string( net.places.size() ) );
        return net.places.back();
    };
    const auto transition = [ & ]( std::optional< Label > label ) {
        net.transitions.push_back( { "t" + std::to_string( net.transitions.size() ), std::move( label ) } );
        return net.transitions.back().id;
    };
    const auto arc = [ & ]( const std::string& from, const std::string& to ) { net.arcs.push_back( { from, to } ); };

    std::function< void( const ProcessTree&, const std::string&, const std::string& ) > build =
        [ & ]( const ProcessTree& node, const std::string& in, const std::string& out ) {
            switch ( node.op )
            {
            case ProcessTree::Op::Activity:
            case ProcessTree::Op::Silent: {
                const auto t = transition( node.op == ProcessTree::Op::Activity ? std::optional( node.label ) : std::nullopt );
                arc( in, t );
                arc( t, out );
                break;
            }
            case ProcessTree::Op::Sequence: {
                std::string from = in;
                for ( std::size_t i = 0; i < node.children.size(); ++i )
                {
                    const auto to = i + 1 == node.children.size() ? out : place();
                    build( node.children[ i ], from, to );
                    from = to;
                }
                break;
            }
            case ProcessTree::Op::Choice:
                for ( const auto& c : node.children )
                    build( c, in, out );
                break;
            case ProcessTree::Op::Parallel: {
                const auto split = transition( std::nullopt );
                const auto join = transition( std::nullopt );
                arc( in, split );
                arc( join, out );
                for ( const auto& c : node.children )
                {
                    const auto b_in = place();
                    const auto b_out = place();
                    arc( split, b_in );
                    arc( b_out, join );
                    build( c, b_in, b_out );
                }
                break;
            }
            case ProcessTree::Op::Loop: {
                const auto mid = place();
                build( node.children.at( 0 ), in, mid );
                build( node.children.at( 1 ), mid, in );
                const auto exit = transition( std::nullopt );
                arc( mid, exit );
                arc( exit, out );
                break;
            }
            }
        };

    const auto source = place();
    const auto sink = place();
    build( tree, source, sink );
    net.initial = { { source, 1 } };
    net.final = { { sink, 1 } };
    return net;
}

ProcessModel SyntheticModel::to_process_model() const
{
    return ProcessModel( id, activities, playout( net ), roles, role_map );
}

namespace
{

struct Step
{
    const char* verb;
    const char* object;
    const char* role;
};

using Tree = ProcessTree;
using Op = ProcessTree::Op;

// A lifecycle fragment: its steps and a shape builder taking one leaf per step.
struct Fragment
{
    std::vector< Step > steps;
    std::function< Tree( std::vector< Tree > ) > shape;
};

Tree seq( std::vector< Tree > c ) { return Tree::node( Op::Sequence, std::move( c ) ); }
Tree xor_( std::vector< Tree > c ) { return Tree::node( Op::Choice, std::move( c ) ); }
Tree loop( Tree body, Tree redo ) { return Tree::node( Op::Loop, { std::move( body ), std::move( redo ) } ); }

const std::vector< Fragment >& library()
{
    static const std::vector< Fragment > lib = {
        { { { "create", "purchase order", "purchasing clerk" },
            { "check", "purchase order", "purchasing clerk" },
            { "approve", "purchase order", "manager" },
            { "send", "purchase order", "purchasing clerk" },
            { "reject", "purchase order", "manager" } },
          []( std::vector< Tree > l ) {
              return seq( { l[ 0 ], l[ 1 ], xor_( { seq( { l[ 2 ], l[ 3 ] } ), l[ 4 ] } ) } );
          } },
        { { { "receive", "invoice", "accounts payable" },
            { "check", "invoice", "accounts payable" },
            { "approve", "invoice", "manager" },
            { "pay", "invoice", "accounts payable" },
            { "reject", "invoice", "manager" } },
          []( std::vector< Tree > l ) {
              return seq( { l[ 0 ], l[ 1 ], xor_( { seq( { l[ 2 ], l[ 3 ] } ), l[ 4 ] } ) } );
          } },
        { { { "receive", "goods", "warehouse clerk" },
            { "inspect", "goods", "warehouse clerk" },
            { "store", "goods", "warehouse clerk" } },
          []( std::vector< Tree > l ) { return seq( { l[ 0 ], l[ 1 ], l[ 2 ] } ); } },
        { { { "receive", "customer order", "sales clerk" },
            { "check", "customer order", "sales clerk" },
            { "confirm", "customer order", "sales clerk" },
            { "ship", "customer order", "warehouse clerk" },
            { "cancel", "customer order", "sales clerk" } },
          []( std::vector< Tree > l ) {
              return seq( { l[ 0 ], l[ 1 ], xor_( { seq( { l[ 2 ], l[ 3 ] } ), l[ 4 ] } ) } );
          } },
        { { { "submit", "application", "applicant" },
            { "review", "application", "officer" },
            { "accept", "application", "officer" },
            { "reject", "application", "officer" },
            { "notify", "applicant", "officer" } },
          []( std::vector< Tree > l ) { return seq( { l[ 0 ], l[ 1 ], xor_( { l[ 2 ], l[ 3 ] } ), l[ 4 ] } ); } },
        { { { "register", "claim", "claims handler" },
            { "assess", "claim", "claims handler" },
            { "request", "document", "claims handler" },
            { "pay", "claim", "accounts payable" },
            { "reject", "claim", "claims handler" } },
          []( std::vector< Tree > l ) { return seq( { l[ 0 ], loop( l[ 1 ], l[ 2 ] ), xor_( { l[ 3 ], l[ 4 ] } ) } ); } },
        { { { "draft", "contract", "legal counsel" },
            { "review", "contract", "legal counsel" },
            { "sign", "contract", "manager" },
            { "archive", "contract", "legal counsel" } },
          []( std::vector< Tree > l ) { return seq( { l[ 0 ], l[ 1 ], l[ 2 ], l[ 3 ] } ); } },
        { { { "plan", "shipment", "logistics planner" },
            { "load", "shipment", "warehouse clerk" },
            { "deliver", "shipment", "driver" } },
          []( std::vector< Tree > l ) { return seq( { l[ 0 ], l[ 1 ], l[ 2 ] } ); } },
    };
    return lib;
}

std::string title_case( const std::string& s )
{
    std::string out = s;
    for ( std::size_t i = 0; i < out.size(); ++i )
        if ( i == 0 || out[ i - 1 ] == ' ' )
            out[ i ] = static_cast< char >( std::toupper( static_cast< unsigned char >( out[ i ] ) ) );
    return out;
}

std::string camel_case( const std::string& s )
{
    std::string out;
    bool upper = false;
    for ( char c : s )
    {
        if ( c == ' ' )
        {
            upper = true;
            continue;
        }
        out += upper ? static_cast< char >( std::toupper( static_cast< unsigned char >( c ) ) ) : c;
        upper = false;
    }
    return out;
}

std::size_t leaf_count( const Tree& t )
{
    if ( t.op == Op::Activity )
        return 1;
    std::size_t n = 0;
    for ( const auto& c : t.children )
        n += leaf_count( c );
    return n;
}

} // namespace

std::vector< SyntheticModel > synthetic_collection( std::size_t count, std::uint64_t seed )
{
    std::mt19937_64 rng( seed );
    const auto chance = [ & ]( double p ) { return std::bernoulli_distribution( p )( rng ); };
    const auto pick = [ & ]( std::size_t n ) { return std::uniform_int_distribution< std::size_t >( 0, n - 1 )( rng ); };
    const auto& lib = library();

    std::vector< SyntheticModel > out;
    for ( std::size_t m = 0; m < count; ++m )
    {
        SyntheticModel model;
        char id[ 32 ];
        std::snprintf( id, sizeof id, "m%02zu", m + 1 );
        model.id = id;

        // Per-model vocabulary choices.
        std::map< std::string, std::string > verb_swap;
        if ( chance( 0.3 ) )
            verb_swap[ "check" ] = chance( 0.5 ) ? "examine" : "verify";
        if ( chance( 0.2 ) )
            verb_swap[ "approve" ] = "authorize";

        const auto render = [ & ]( const Step& s ) {
            std::string verb = s.verb;
            if ( const auto it = verb_swap.find( verb ); it != verb_swap.end() )
                verb = it->second;
            const std::string plain = verb + " " + s.object;
            const double style = std::uniform_real_distribution< double >( 0.0, 1.0 )( rng );
            if ( style < 0.55 )
                return plain;
            if ( style < 0.75 )
                return std::string( s.object ) + " " + past_participle( verb );
            if ( style < 0.9 )
                return title_case( plain );
            return camel_case( plain );
        };

        const auto instantiate = [ & ]( const Fragment& f ) {
            std::vector< Tree > leaves;
            for ( const auto& s : f.steps )
            {
                auto label = render( s );
                model.activities.insert( label );
                if ( chance( 0.8 ) )
                {
                    model.roles.insert( s.role );
                    model.role_map[ label ] = s.role;
                }
                leaves.push_back( Tree::activity( std::move( label ) ) );
            }
            // Rework on the second step, or an optional last step.
            if ( chance( 0.25 ) )
                leaves[ 1 ] = loop( leaves[ 1 ], Tree::silent() );
            else if ( chance( 0.3 ) )
                leaves.back() = xor_( { leaves.back(), Tree::silent() } );
            return f.shape( std::move( leaves ) );
        };

        std::vector< std::size_t > chosen;
        const std::size_t parts = chance( 0.25 ) ? 3 : 2;
        while ( chosen.size() < parts )
        {
            const auto f = pick( lib.size() );
            if ( std::find( chosen.begin(), chosen.end(), f ) == chosen.end() )
                chosen.push_back( f );
        }
        std::vector< Tree > parts_trees;
        for ( auto f : chosen )
            parts_trees.push_back( instantiate( lib[ f ] ) );

        if ( parts == 2 && leaf_count( parts_trees[ 0 ] ) + leaf_count( parts_trees[ 1 ] ) <= 8 && chance( 0.3 ) )
            model.tree = Tree::node( Op::Parallel, std::move( parts_trees ) );
        else
            model.tree = seq( std::move( parts_trees ) );
        model.net = to_workflow_net( model.tree );
        out.push_back( std::move( model ) );
    }
    return out;
}

} // namespace bpcheck
