#pragma once

#include "bpcheck/model.hpp"

#include <filesystem>
#include <map>
#include <mutex>
#include <span>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

namespace bpcheck
{

/// Word lists backing rule-based label analysis.
class Lexicon
{
    std::set< Label > _verbs;
    std::map< Label, std::set< Label > > _synonyms;
    std::map< Label, Label > _irregular;   // past form -> present
    std::map< Label, Label > _participles; // present -> past participle

public:
    /// The lexicon shipped with the library.
    [[nodiscard]] static const Lexicon& builtin();

    /// Loads `verbs.txt`, `synonyms.txt`, `irregular.txt` and `participles.txt` from `dir`.
    /// Missing files fall back to the builtin content. Throws ModelError on malformed lines.
    [[nodiscard]] static Lexicon load( const std::filesystem::path& dir );

    /// Parses file contents; each argument uses the corresponding file format.
    [[nodiscard]] static Lexicon parse( std::string_view verbs, std::string_view synonyms, std::string_view irregular,
                                        std::string_view participles );

    [[nodiscard]] bool is_verb( std::string_view lemma ) const;
    [[nodiscard]] const std::set< Label >* synonyms_of( std::string_view lemma ) const;
    [[nodiscard]] std::optional< Label > irregular_present( std::string_view past ) const;
    [[nodiscard]] std::optional< Label > irregular_participle( std::string_view present ) const;
    [[nodiscard]] const std::map< Label, std::set< Label > >& synonyms() const { return _synonyms; }
};

struct ObjectActionPair
{
    Label object;
    std::optional< Label > action; // present-tense lemma

    auto operator<=>( const ObjectActionPair& ) const = default;
};

/// Rule-based object/action extraction. Pairs are returned in the order their actions appear.
/// Labels naming several objects yield one compound object.
[[nodiscard]] std::vector< ObjectActionPair > parse_label( std::string_view label, const Lexicon& lex = Lexicon::builtin() );

/// The business object of a label, if it has one.
[[nodiscard]] std::optional< Label > object_of( std::string_view label, const Lexicon& lex = Lexicon::builtin() );

/// Present-tense lemma of a verb form. Idempotent; unknown words come back unchanged.
[[nodiscard]] Label standardize_action( std::string_view action, const Lexicon& lex = Lexicon::builtin() );

/// Re-emits a label as "action object"; labels without an action are only normalized.
[[nodiscard]] Label standardize_label( std::string_view label, const Lexicon& lex = Lexicon::builtin() );

/// Same lemma or linked in the synonym lexicon.
[[nodiscard]] bool syn( std::string_view n1, std::string_view n2, const Lexicon& lex = Lexicon::builtin() );

/// "create" -> "created", "send" -> "sent".
[[nodiscard]] Label past_participle( std::string_view verb, const Lexicon& lex = Lexicon::builtin() );

/// Memoized parse_label results with the projections built on them. Safe to share across threads.
class LabelIndex
{
    const Lexicon* _lex;
    mutable std::mutex _mutex;
    mutable std::map< Label, std::vector< ObjectActionPair > > _cache;

public:
    explicit LabelIndex( const Lexicon& lex = Lexicon::builtin() ) : _lex{ &lex } {}

    [[nodiscard]] const Lexicon& lexicon() const { return *_lex; }
    [[nodiscard]] std::vector< ObjectActionPair > pairs( const Label& activity ) const;
    [[nodiscard]] std::optional< Label > object( const Label& activity ) const;

    /// Objects of the activities in order; activities without an object are dropped.
    [[nodiscard]] Sequence object_projection( std::span< const Label > activities ) const;
    /// Actions applied to `object`, in order. Activities naming several actions contribute each of them.
    [[nodiscard]] Sequence action_projection( std::span< const Label > activities, const Label& object ) const;

    [[nodiscard]] std::set< Label > objects( const std::set< Label >& activities ) const;
    [[nodiscard]] std::map< Label, std::set< Label > > actions_per_object( const std::set< Label >& activities ) const;
};

} // namespace bpcheck
