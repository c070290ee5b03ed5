#include "doctest.h"
#include "support.hpp"

#include "bpcheck/semantics.hpp"
#include "bpcheck/similarity.hpp"

#include <fstream>

using namespace bpcheck;

namespace
{

using Pairs = std::vector< ObjectActionPair >;

const std::vector< std::string > phrases{
    "order", "purchase order", "banana", "approve purchase order", "create invoice", "invoice created",
    "ship goods", "goods receipt", "check invoice amount", "make payment", "po approval", "x",
};

} // namespace

TEST_CASE( "parse_label" )
{
    CHECK( parse_label( "approve purchase order" ) == Pairs{ { "purchase order", "approve" } } );
    CHECK( parse_label( "invoice created" ) == Pairs{ { "invoice", "create" } } );
    CHECK( parse_label( "ship goods" ) == Pairs{ { "goods", "ship" } } );
    CHECK( parse_label( "goods receipt" ) == Pairs{ { "goods receipt", std::nullopt } } );
    CHECK( parse_label( "" ).empty() );
}

TEST_CASE( "parse_label: tokenization and conjunctions" )
{
    CHECK( parse_label( "approvePurchaseOrder" ) == Pairs{ { "purchase order", "approve" } } );
    CHECK( parse_label( "approve_purchase_order" ) == Pairs{ { "purchase order", "approve" } } );
    CHECK( parse_label( "receive and check document" ) ==
           Pairs{ { "document", "receive" }, { "document", "check" } } );
    CHECK( parse_label( "purchase order checking" ) == Pairs{ { "purchase order", "check" } } );
}

TEST_CASE( "standardize_action" )
{
    CHECK( standardize_action( "approved" ) == "approve" );
    CHECK( standardize_action( "create" ) == "create" );
    CHECK( standardize_action( "sent" ) == "send" );
    CHECK( standardize_action( "carried" ) == "carry" );
    CHECK( standardize_action( "shipped" ) == "ship" );
    CHECK( standardize_action( "checking" ) == "check" );
}

TEST_CASE( "irregular forms come from the shipped lexicon file" )
{
    std::ifstream in( testing::source_path( "data/lexicon/irregular.txt" ) );
    REQUIRE( in );
    bool found = false;
    for ( std::string line; std::getline( in, line ); )
        found = found || line == "sent\tsend";
    CHECK( found );
}

TEST_CASE( "standardize_label" )
{
    CHECK( standardize_label( "invoice created" ) == "create invoice" );
    CHECK( standardize_label( "create invoice" ) == "create invoice" );
    CHECK( standardize_label( "PO approval" ) == "po approval" );
    CHECK( standardize_label( "Purchase Order Approved" ) == "approve purchase order" );
}

TEST_CASE( "syn" )
{
    CHECK( syn( "check", "examine" ) );
    CHECK( syn( "examine", "check" ) );
    CHECK( syn( "check", "check" ) );
    CHECK_FALSE( syn( "check", "pay" ) );
    CHECK( syn( "unknownverb", "unknownverb" ) );
    CHECK_FALSE( syn( "unknownverb", "otherverb" ) );
}

TEST_CASE( "lexicon parsing closes synonyms symmetrically" )
{
    const auto lex = Lexicon::parse( "check\nverify\n", "check\tverify\n", "", "" );
    CHECK( syn( "verify", "check", lex ) );
    CHECK( syn( "check", "verify", lex ) );
    CHECK_THROWS_AS( (void)Lexicon::parse( "", "no tab here\n", "", "" ), ModelError );
}

TEST_CASE( "past_participle" )
{
    CHECK( past_participle( "create" ) == "created" );
    CHECK( past_participle( "send" ) == "sent" );
    CHECK( past_participle( "check" ) == "checked" );
    CHECK( past_participle( "approve" ) == "approved" );
}

TEST_CASE( "lexical similarity" )
{
    const LexicalSimilarity lex;
    CHECK( lex.sim( "order", "order" ) == doctest::Approx( 1.0 ) );
    CHECK( lex.sim( "order", "purchase order" ) > 0.5 );
    CHECK( lex.sim( "order", "banana" ) < 0.5 );
    // 0.5 * token Dice alone reaches 1/3 here.
    CHECK( lexical_similarity( "order", "purchase order" ) >= 0.5 * 2.0 / 3.0 );
}

TEST_CASE( "match" )
{
    const LexicalSimilarity lex;
    CHECK( lex.match( "order", "purchase order", 0.5 ) );
    CHECK( lex.match( "x", "x", 0.5 ) );
    for ( const auto& p : phrases )
        for ( const auto& q : phrases )
            CHECK_FALSE( lex.match( p, q, 1.0 ) );
}

TEST_CASE( "vector-file similarity" )
{
    testing::TempDir dir( "vectors" );
    const auto path = dir.path() / "v.txt";
    {
        std::ofstream out( path );
        out << "order\t1 0 0\npurchase\t0 1 0\ninvoice\t0 0 1\napprove order\t1 1 0\n";
    }
    const auto v = VectorFileSimilarity::load( path );
    CHECK( v->dimension() == 3 );
    CHECK( v->sim( "order", "order" ) == doctest::Approx( 1.0 ) );
    CHECK( v->sim( "order", "invoice" ) == doctest::Approx( 0.0 ) );
    CHECK( v->sim( "approve order", "order" ) == doctest::Approx( 1.0 / std::sqrt( 2.0 ) ) );
    // "purchase order" is averaged from its word vectors.
    CHECK( v->sim( "purchase order", "order" ) == doctest::Approx( 1.0 / std::sqrt( 2.0 ) ) );
    // No stored word at all: lexical fallback.
    CHECK( v->sim( "banana split", "banana splits" ) == doctest::Approx( lexical_similarity( "banana split", "banana splits" ) ) );

    {
        std::ofstream out( dir.path() / "bad.txt" );
        out << "a\t1 0\nb\t1 0 0\n";
    }
    CHECK_THROWS_AS( (void)VectorFileSimilarity::load( dir.path() / "bad.txt" ), SimilarityError );
    CHECK_THROWS_AS( (void)VectorFileSimilarity::load( dir.path() / "missing.txt" ), SimilarityError );
}

TEST_CASE( "remote similarity reports failures as errors" )
{
    RemoteOptions opts;
    opts.endpoint = "http://127.0.0.1:9/embed";
    opts.timeout = std::chrono::milliseconds( 200 );
    const RemoteSimilarity remote( opts );
    CHECK( remote.sim( "same", "same" ) == doctest::Approx( 1.0 ) );
    CHECK_THROWS_AS( (void)remote.sim( "order", "invoice" ), SimilarityError );
    CHECK_THROWS_AS( RemoteSimilarity( RemoteOptions{ "ftp://host/x" } ), SimilarityError );
}

TEST_CASE( "property: standardize_action is idempotent" )
{
    const std::vector< std::string > forms{ "approved", "sent", "checking", "created", "carried", "ships",
                                            "paid",     "stored", "planned", "rejected", "received", "go" };
    for ( const auto& f : forms )
    {
        const auto once = standardize_action( f );
        CHECK( standardize_action( once ) == once );
    }
}

TEST_CASE( "property: canonical labels re-parse to the same pairs" )
{
    const std::vector< std::string > labels{ "invoice created", "approve purchase order", "Goods Received",
                                             "shipCustomerOrder", "goods receipt", "purchase order sent" };
    for ( const auto& l : labels )
    {
        const auto canonical = standardize_label( l );
        const auto pairs = parse_label( canonical );
        CHECK( pairs == parse_label( standardize_label( canonical ) ) );
        CHECK( standardize_label( canonical ) == canonical );
    }
}

TEST_CASE( "property: similarity is symmetric, bounded and reflexive" )
{
    const LexicalSimilarity lex;
    for ( const auto& p : phrases )
    {
        CHECK( lex.sim( p, p ) == doctest::Approx( 1.0 ) );
        for ( const auto& q : phrases )
        {
            const double s = lex.sim( p, q );
            CHECK( s >= 0.0 );
            CHECK( s <= 1.0 );
            CHECK( std::abs( s - lex.sim( q, p ) ) < 1e-9 );
            // A larger threshold never accepts more.
            if ( lex.match( p, q, 0.7 ) )
                CHECK( lex.match( p, q, 0.5 ) );
        }
    }
}
