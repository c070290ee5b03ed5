#include "bpcheck/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <span>
#include <sstream>

namespace bpcheck
{

namespace embedded
{
extern const std::string_view verbs_txt;
extern const std::string_view synonyms_txt;
extern const std::string_view irregular_txt;
extern const std::string_view participles_txt;
} // namespace embedded

namespace
{

std::string_view trim( std::string_view s )
{
    while ( !s.empty() && std::isspace( static_cast< unsigned char >( s.front() ) ) )
        s.remove_prefix( 1 );
    while ( !s.empty() && std::isspace( static_cast< unsigned char >( s.back() ) ) )
        s.remove_suffix( 1 );
    return s;
}

// Calls `fn(line_number, line)` for every non-blank, non-comment line.
template < typename Fn >
void for_each_line( std::string_view text, Fn&& fn )
{
    std::size_t number = 0;
    while ( !text.empty() )
    {
        const auto nl = text.find( '\n' );
        auto line = text.substr( 0, nl );
        text = nl == std::string_view::npos ? std::string_view{} : text.substr( nl + 1 );
        ++number;
        if ( !line.empty() && line.back() == '\r' )
            line.remove_suffix( 1 );
        if ( trim( line ).empty() || trim( line ).front() == '#' )
            continue;
        fn( number, line );
    }
}

std::pair< std::string_view, std::string_view > split_tab( std::size_t number, std::string_view line,
                                                           std::string_view file )
{
    const auto tab = line.find( '\t' );
    if ( tab == std::string_view::npos )
        throw ModelError( std::string( file ) + ":" + std::to_string( number ) + ": expected a tab-separated pair" );
    return { trim( line.substr( 0, tab ) ), trim( line.substr( tab + 1 ) ) };
}

std::string read_file( const std::filesystem::path& p )
{
    std::ifstream in( p, std::ios::binary );
    if ( !in )
        throw ModelError( "cannot read lexicon file " + p.string() );
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool is_vowel( char c ) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool ends_with( std::string_view s, std::string_view suffix )
{
    return s.size() > suffix.size() && s.substr( s.size() - suffix.size() ) == suffix;
}

bool double_consonant_end( std::string_view s )
{
    return s.size() >= 2 && s.back() == s[ s.size() - 2 ] && !is_vowel( s.back() );
}

bool is_connector( std::string_view t ) { return t == "and" || t == "or" || t == "&" || t == "," || t == "/"; }

bool is_article( std::string_view t ) { return t == "the" || t == "a" || t == "an"; }

std::vector< std::string > tokenize( std::string_view label )
{
    std::vector< std::string > out;
    std::string current;
    for ( char ch : normalize_label( label ) )
    {
        if ( ch == ' ' || ch == ',' || ch == '&' || ch == '/' )
        {
            if ( !current.empty() )
                out.push_back( std::move( current ) );
            current.clear();
            if ( ch != ' ' )
                out.emplace_back( 1, ch == '&' ? '&' : ch );
            continue;
        }
        current.push_back( ch );
    }
    if ( !current.empty() )
        out.push_back( std::move( current ) );
    // Normalize "&" to "and" so compound labels read uniformly.
    for ( auto& t : out )
        if ( t == "&" )
            t = "and";
    return out;
}

std::string join( std::span< const std::string > tokens )
{
    std::string out;
    for ( const auto& t : tokens )
    {
        if ( t == "," )
        {
            out += ",";
            continue;
        }
        if ( !out.empty() )
            out += ' ';
        out += t;
    }
    return out;
}

// Lemma if the token is an inflected (past, participle or gerund) verb form.
std::optional< Label > inflected_verb( std::string_view token, const Lexicon& lex )
{
    if ( lex.is_verb( token ) )
        return std::nullopt;
    if ( auto irregular = lex.irregular_present( token ) )
        return irregular;
    if ( ends_with( token, "ed" ) || ends_with( token, "ing" ) )
    {
        auto lemma = standardize_action( token, lex );
        if ( lemma != token && lex.is_verb( lemma ) )
            return lemma;
    }
    return std::nullopt;
}

std::optional< Label > any_verb( std::string_view token, const Lexicon& lex )
{
    auto lemma = standardize_action( token, lex );
    if ( lex.is_verb( lemma ) )
        return lemma;
    return std::nullopt;
}

Label object_text( std::vector< std::string > tokens )
{
    while ( !tokens.empty() && ( is_connector( tokens.front() ) || is_article( tokens.front() ) ) )
        tokens.erase( tokens.begin() );
    while ( !tokens.empty() && is_connector( tokens.back() ) )
        tokens.pop_back();
    return join( tokens );
}

std::vector< ObjectActionPair > make_pairs( const Label& object, const std::vector< Label >& actions )
{
    std::vector< ObjectActionPair > out;
    if ( object.empty() )
        return out;
    for ( const auto& a : actions )
    {
        ObjectActionPair p{ object, a };
        if ( std::find( out.begin(), out.end(), p ) == out.end() )
            out.push_back( std::move( p ) );
    }
    return out;
}

} // namespace

const Lexicon& Lexicon::builtin()
{
    static const Lexicon lex = parse( embedded::verbs_txt, embedded::synonyms_txt, embedded::irregular_txt,
                                      embedded::participles_txt );
    return lex;
}

Lexicon Lexicon::load( const std::filesystem::path& dir )
{
    const auto pick = [ & ]( const char* name, std::string_view fallback ) {
        const auto p = dir / name;
        return std::filesystem::exists( p ) ? read_file( p ) : std::string( fallback );
    };
    return parse( pick( "verbs.txt", embedded::verbs_txt ), pick( "synonyms.txt", embedded::synonyms_txt ),
                  pick( "irregular.txt", embedded::irregular_txt ), pick( "participles.txt", embedded::participles_txt ) );
}

Lexicon Lexicon::parse( std::string_view verbs, std::string_view synonyms, std::string_view irregular,
                        std::string_view participles )
{
    Lexicon lex;
    for_each_line( verbs, [ & ]( std::size_t, std::string_view line ) { lex._verbs.insert( normalize_label( line ) ); } );

    for_each_line( synonyms, [ & ]( std::size_t n, std::string_view line ) {
        const auto [ lemma_raw, rest ] = split_tab( n, line, "synonyms.txt" );
        const auto lemma = normalize_label( lemma_raw );
        std::string_view list = rest;
        while ( !list.empty() )
        {
            const auto comma = list.find( ',' );
            const auto word = normalize_label( trim( list.substr( 0, comma ) ) );
            list = comma == std::string_view::npos ? std::string_view{} : list.substr( comma + 1 );
            if ( word.empty() || word == lemma )
                continue;
            lex._synonyms[ lemma ].insert( word );
            lex._synonyms[ word ].insert( lemma );
        }
    } );

    for_each_line( irregular, [ & ]( std::size_t n, std::string_view line ) {
        const auto [ past, present ] = split_tab( n, line, "irregular.txt" );
        lex._irregular[ normalize_label( past ) ] = normalize_label( present );
    } );

    for_each_line( participles, [ & ]( std::size_t n, std::string_view line ) {
        const auto [ present, participle ] = split_tab( n, line, "participles.txt" );
        lex._participles[ normalize_label( present ) ] = normalize_label( participle );
    } );
    return lex;
}

bool Lexicon::is_verb( std::string_view lemma ) const { return _verbs.contains( Label( lemma ) ); }

const std::set< Label >* Lexicon::synonyms_of( std::string_view lemma ) const
{
    const auto it = _synonyms.find( Label( lemma ) );
    return it == _synonyms.end() ? nullptr : &it->second;
}

std::optional< Label > Lexicon::irregular_present( std::string_view past ) const
{
    const auto it = _irregular.find( Label( past ) );
    return it == _irregular.end() ? std::nullopt : std::optional< Label >( it->second );
}

std::optional< Label > Lexicon::irregular_participle( std::string_view present ) const
{
    const auto it = _participles.find( Label( present ) );
    return it == _participles.end() ? std::nullopt : std::optional< Label >( it->second );
}

Label standardize_action( std::string_view action, const Lexicon& lex )
{
    const Label t = normalize_label( action );
    if ( t.empty() || lex.is_verb( t ) )
        return t;
    if ( auto irregular = lex.irregular_present( t ) )
        return *irregular;

    std::vector< Label > candidates;
    const std::string_view v = t;
    if ( ends_with( v, "ied" ) )
        candidates.push_back( Label( v.substr( 0, v.size() - 3 ) ) + "y" );
    if ( ends_with( v, "ed" ) )
    {
        const auto stem = v.substr( 0, v.size() - 2 );
        if ( double_consonant_end( stem ) )
            candidates.emplace_back( stem.substr( 0, stem.size() - 1 ) );
        candidates.emplace_back( v.substr( 0, v.size() - 1 ) );
        candidates.emplace_back( stem );
    }
    if ( ends_with( v, "ing" ) )
    {
        const auto stem = v.substr( 0, v.size() - 3 );
        if ( double_consonant_end( stem ) )
            candidates.emplace_back( stem.substr( 0, stem.size() - 1 ) );
        candidates.push_back( Label( stem ) + "e" );
        candidates.emplace_back( stem );
    }
    if ( ends_with( v, "ies" ) )
        candidates.push_back( Label( v.substr( 0, v.size() - 3 ) ) + "y" );
    if ( ends_with( v, "es" ) )
        candidates.emplace_back( v.substr( 0, v.size() - 2 ) );
    if ( ends_with( v, "s" ) )
        candidates.emplace_back( v.substr( 0, v.size() - 1 ) );

    for ( const auto& c : candidates )
        if ( lex.is_verb( c ) )
            return c;
    return t;
}

std::vector< ObjectActionPair > parse_label( std::string_view label, const Lexicon& lex )
{
    auto tokens = tokenize( label );
    if ( tokens.empty() )
        return {};

    // Trailing participles or gerunds: "invoice created", "document received and checked".
    if ( tokens.size() >= 2 )
    {
        std::vector< Label > actions;
        std::size_t cut = tokens.size();
        for ( std::size_t i = tokens.size(); i-- > 0; )
        {
            if ( is_connector( tokens[ i ] ) && !actions.empty() )
                continue;
            if ( auto lemma = inflected_verb( tokens[ i ], lex ) )
            {
                actions.push_back( *lemma );
                cut = i;
                continue;
            }
            break;
        }
        if ( !actions.empty() && cut > 0 )
        {
            std::reverse( actions.begin(), actions.end() );
            auto object = object_text( { tokens.begin(), tokens.begin() + static_cast< std::ptrdiff_t >( cut ) } );
            if ( !object.empty() )
                return make_pairs( object, actions );
        }
    }

    // Leading verbs: "approve purchase order", "receive and check document".
    if ( auto first = any_verb( tokens.front(), lex ) )
    {
        std::vector< Label > actions{ *first };
        std::size_t i = 1;
        while ( i + 1 < tokens.size() && is_connector( tokens[ i ] ) )
        {
            auto next = any_verb( tokens[ i + 1 ], lex );
            if ( !next )
                break;
            actions.push_back( *next );
            i += 2;
        }
        auto object = object_text( { tokens.begin() + static_cast< std::ptrdiff_t >( i ), tokens.end() } );
        return make_pairs( object, actions );
    }

    return { ObjectActionPair{ object_text( tokens ), std::nullopt } };
}

std::optional< Label > object_of( std::string_view label, const Lexicon& lex )
{
    const auto pairs = parse_label( label, lex );
    if ( pairs.empty() )
        return std::nullopt;
    return pairs.front().object;
}

Label standardize_label( std::string_view label, const Lexicon& lex )
{
    const auto pairs = parse_label( label, lex );
    std::vector< Label > actions;
    for ( const auto& p : pairs )
        if ( p.action && std::find( actions.begin(), actions.end(), *p.action ) == actions.end() )
            actions.push_back( *p.action );
    if ( actions.empty() )
        return normalize_label( label );

    std::string out;
    for ( std::size_t i = 0; i < actions.size(); ++i )
    {
        if ( i > 0 )
            out += " and ";
        out += actions[ i ];
    }
    out += ' ';
    out += pairs.front().object;
    return out;
}

bool syn( std::string_view n1, std::string_view n2, const Lexicon& lex )
{
    if ( n1 == n2 )
        return true;
    const auto* s = lex.synonyms_of( n1 );
    return s && s->contains( Label( n2 ) );
}

Label past_participle( std::string_view verb, const Lexicon& lex )
{
    const Label v = normalize_label( verb );
    if ( v.empty() )
        return v;
    if ( auto irregular = lex.irregular_participle( v ) )
        return *irregular;
    if ( v.back() == 'e' )
        return v + "d";
    if ( v.size() >= 2 && v.back() == 'y' && !is_vowel( v[ v.size() - 2 ] ) )
        return v.substr( 0, v.size() - 1 ) + "ied";

    // Single-syllable consonant-vowel-consonant verbs double the final consonant.
    int vowel_groups = 0;
    for ( std::size_t i = 0; i < v.size(); ++i )
        if ( is_vowel( v[ i ] ) && ( i == 0 || !is_vowel( v[ i - 1 ] ) ) )
            ++vowel_groups;
    const std::size_t n = v.size();
    if ( vowel_groups == 1 && n >= 3 && !is_vowel( v[ n - 1 ] ) && is_vowel( v[ n - 2 ] ) && !is_vowel( v[ n - 3 ] ) &&
         v[ n - 1 ] != 'w' && v[ n - 1 ] != 'x' && v[ n - 1 ] != 'y' )
        return v + v.back() + "ed";
    return v + "ed";
}

} // namespace bpcheck

namespace bpcheck
{

std::vector< ObjectActionPair > LabelIndex::pairs( const Label& activity ) const
{
    {
        std::lock_guard lock( _mutex );
        if ( const auto it = _cache.find( activity ); it != _cache.end() )
            return it->second;
    }
    auto parsed = parse_label( activity, *_lex );
    std::lock_guard lock( _mutex );
    return _cache.emplace( activity, std::move( parsed ) ).first->second;
}

std::optional< Label > LabelIndex::object( const Label& activity ) const
{
    const auto p = pairs( activity );
    if ( p.empty() )
        return std::nullopt;
    return p.front().object;
}

Sequence LabelIndex::object_projection( std::span< const Label > activities ) const
{
    Sequence out;
    for ( const auto& a : activities )
        if ( auto o = object( a ) )
            out.push_back( std::move( *o ) );
    return out;
}

Sequence LabelIndex::action_projection( std::span< const Label > activities, const Label& object ) const
{
    Sequence out;
    for ( const auto& a : activities )
        for ( const auto& p : pairs( a ) )
            if ( p.object == object && p.action )
                out.push_back( *p.action );
    return out;
}

std::set< Label > LabelIndex::objects( const std::set< Label >& activities ) const
{
    std::set< Label > out;
    for ( const auto& a : activities )
        if ( auto o = object( a ) )
            out.insert( std::move( *o ) );
    return out;
}

std::map< Label, std::set< Label > > LabelIndex::actions_per_object( const std::set< Label >& activities ) const
{
    std::map< Label, std::set< Label > > out;
    for ( const auto& a : activities )
        for ( const auto& p : pairs( a ) )
            if ( p.action )
                out[ p.object ].insert( *p.action );
    return out;
}

} // namespace bpcheck
