/*
 *   Copyright 2026 The evcomb Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @file
 *
 * Closed-form combination rules and the factory that assembles full-interval
 * combiners from an OperatorSpec.
 *
 * The Hamacher family on [0, 1],
 *     a * b = (a + b + (r - 2) ab) / (1 + (r - 1) ab),   r > 0,
 * is generated by h(a) = log(r / (1 - a) + 1 - r). r = 1 is Bernoulli's rule
 * a + b - ab, r = 2 is relativistic velocity addition (a + b) / (1 + ab).
 *
 * Cross-sign combination for a symmetric Hamacher operator is always computed
 * through the signed generator. Only the r = 1 (certainty factor) and r = 2
 * (velocity) cross forms are provided as closed forms.
 */

#ifndef EVCOMB_OPERATORS_HPP
#define EVCOMB_OPERATORS_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "combiner.hpp"
#include "error.hpp"
#include "generators.hpp"
#include "interval.hpp"

namespace evcomb {

namespace detail {

	inline const Interval &unit_interval() {
		static const Interval unit( 0.0, 1.0 );
		return unit;
	}

	inline const Interval &signed_unit_interval() {
		static const Interval signed_unit( -1.0, 1.0 );
		return signed_unit;
	}

	inline void require_positive( double x, const char *name ) {
		if( !( x > 0 ) || !std::isfinite( x ) ) {
			throw Error( ErrorKind::NonpositiveParameter, std::string( name ) + " = " + fmt( x ) );
		}
	}

	inline void require_pair( double a, double b, const Interval &range ) {
		validate_value( a, range );
		validate_value( b, range );
	}

	inline void reject_opposite_endpoints( double a, double b, const Interval &range ) {
		if( ( a == range.lo() && b == range.hi() ) || ( a == range.hi() && b == range.lo() ) ) {
			throw Error( ErrorKind::UndefinedEndpointPair, fmt( a ) + ", " + fmt( b ) );
		}
	}

} // namespace detail

inline double hamacher_combine( double a, double b, double r ) {
	detail::require_pair( a, b, detail::unit_interval() );
	detail::require_positive( r, "r" );
	const double ab = a * b;
	return std::clamp( ( a + b + ( r - 2 ) * ab ) / ( 1 + ( r - 1 ) * ab ), 0.0, 1.0 );
}

inline double bernoulli_combine( double a, double b ) {
	detail::require_pair( a, b, detail::unit_interval() );
	return std::clamp( a + b - a * b, 0.0, 1.0 );
}

/** (a + b) / (1 + ab) on [-1, 1]; 1 + ab is formed without cancellation near (1, -1). */
inline double velocity_combine( double a, double b ) {
	const Interval &range = detail::signed_unit_interval();
	detail::require_pair( a, b, range );
	detail::reject_opposite_endpoints( a, b, range );
	const double denom = ( ( 1 + a ) * ( 1 + b ) + ( 1 - a ) * ( 1 - b ) ) / 2;
	return range.clamp( ( a + b ) / denom );
}

inline double bounded_power_combine( double a, double b, double p ) {
	detail::require_pair( a, b, detail::unit_interval() );
	detail::require_positive( p, "p" );
	if( a == 0 || b == 0 ) { return a + b; }
	return std::min( 1.0, std::pow( std::pow( a, p ) + std::pow( b, p ), 1.0 / p ) );
}

/**
 * The associative certainty-factor rule on [-1, 1]: a + b - ab for positive
 * pairs, a + b + ab for negative pairs, (a + b) / (1 - min(|a|, |b|)) across.
 */
inline double mycin_combine( double a, double b ) {
	const Interval &range = detail::signed_unit_interval();
	detail::require_pair( a, b, range );
	detail::reject_opposite_endpoints( a, b, range );
	double out;
	if( a >= 0 && b >= 0 ) {
		out = a + b - a * b;
	} else if( a <= 0 && b <= 0 ) {
		out = a + b + a * b;
	} else {
		out = ( a + b ) / ( 1 - std::min( std::abs( a ), std::abs( b ) ) );
	}
	return range.clamp( out );
}

inline double median_combine( double a, double b, double z ) {
	return std::max( std::min( a, b ), std::min( std::max( a, b ), z ) );
}

/**
 * (4ab - 1) / (4(a + b - 1)) on each side of 1/2 and 1/2 across. Evaluated as
 * 1/2 + xy / (x + y) with x = a - 1/2, y = b - 1/2; (1/2, 1/2) gives 1/2.
 */
inline double harmonic_annihilator_combine( double a, double b ) {
	detail::require_pair( a, b, detail::unit_interval() );
	const double x = a - 0.5, y = b - 0.5;
	if( ( x < 0 && y > 0 ) || ( x > 0 && y < 0 ) ) { return 0.5; }
	const double sum = x + y;
	if( sum == 0 ) { return 0.5; }
	return std::clamp( 0.5 + x * y / sum, 0.0, 1.0 );
}

/** ab / (ab + (1 - a)(1 - b) s / (1 - s)): posterior update with prior s as the identity. */
inline double bayes_prior_combine( double a, double b, double s ) {
	const Interval &range = detail::unit_interval();
	detail::require_pair( a, b, range );
	if( !( s > 0 && s < 1 ) ) {
		throw Error( ErrorKind::PriorOutOfRange, "s = " + detail::fmt( s ) );
	}
	detail::reject_opposite_endpoints( a, b, range );
	const double ab = a * b;
	return range.clamp( ab / ( ab + ( 1 - a ) * ( 1 - b ) * ( s / ( 1 - s ) ) ) );
}

enum class Family {
	hamacher,
	bernoulli,
	velocity,
	power_sum,
	symmetric_hamacher,
	mycin,
	median,
	harmonic_annihilator,
	bayes_prior,
	custom_piecewise
};

inline const std::vector< std::pair< Family, std::string > > &family_names() {
	static const std::vector< std::pair< Family, std::string > > names{
		{ Family::hamacher, "hamacher" },
		{ Family::bernoulli, "bernoulli" },
		{ Family::velocity, "velocity" },
		{ Family::power_sum, "power_sum" },
		{ Family::symmetric_hamacher, "symmetric_hamacher" },
		{ Family::mycin, "mycin" },
		{ Family::median, "median" },
		{ Family::harmonic_annihilator, "harmonic_annihilator" },
		{ Family::bayes_prior, "bayes_prior" },
		{ Family::custom_piecewise, "custom_piecewise" } };
	return names;
}

inline std::string to_string( Family f ) {
	for( const auto &[ family, name ] : family_names() ) {
		if( family == f ) { return name; }
	}
	return "unknown";
}

inline std::optional< Family > parse_family( const std::string &name ) {
	for( const auto &[ family, name_ ] : family_names() ) {
		if( name_ == name ) { return family; }
	}
	return std::nullopt;
}

/**
 * The rule inside one segment of a custom_piecewise operator: a generator
 * family (hamacher, bernoulli, velocity, power_sum) rescaled onto the
 * segment, or "idempotent" for max / min.
 */
struct SegmentRuleSpec {
	std::string family;
	std::optional< double > r;
	std::optional< double > p;

	friend bool operator==( const SegmentRuleSpec &, const SegmentRuleSpec & ) = default;
};

/** How a custom_piecewise operator combines values on opposite sides of the identity. */
enum class CrossRule {
	signed_generator, ///< signed generator through the affine reflection
	additive          ///< a + b - e, the non-associative original certainty-factor rule
};

struct OperatorSpec {
	Family family = Family::hamacher;
	std::optional< double > r;
	std::optional< double > p;
	std::optional< double > s;
	std::optional< double > z;
	std::optional< std::pair< double, double > > range;
	std::optional< double > identity;
	std::vector< double > idempotents;
	std::vector< SegmentRuleSpec > segments;
	std::optional< CrossRule > cross;
};

namespace detail {

	inline std::optional< std::pair< double, double > > fixed_range( Family f ) {
		switch( f ) {
			case Family::hamacher:
			case Family::bernoulli:
			case Family::power_sum:
			case Family::harmonic_annihilator:
			case Family::bayes_prior:
				return std::make_pair( 0.0, 1.0 );
			case Family::velocity:
			case Family::mycin:
				return std::make_pair( -1.0, 1.0 );
			default:
				return std::nullopt;
		}
	}

	inline Interval spec_range( const OperatorSpec &spec ) {
		if( spec.range ) { return Interval( spec.range->first, spec.range->second ); }
		if( auto fixed = fixed_range( spec.family ) ) { return Interval( fixed->first, fixed->second ); }
		if( spec.family == Family::symmetric_hamacher ) { return Interval( -1.0, 1.0 ); }
		return Interval( 0.0, 1.0 );
	}

	inline bool positive_finite( const std::optional< double > &x ) {
		return x && *x > 0 && std::isfinite( *x );
	}

	inline void validate_segment_rule( const SegmentRuleSpec &rule, const std::string &where,
		std::vector< std::string > &problems ) {
		const std::string &f = rule.family;
		if( f == "hamacher" ) {
			if( !positive_finite( rule.r ) ) { problems.push_back( where + ".r: hamacher needs r > 0" ); }
		} else if( rule.r ) {
			problems.push_back( where + ".r: only hamacher takes r" );
		}
		if( f == "power_sum" ) {
			if( !positive_finite( rule.p ) ) { problems.push_back( where + ".p: power_sum needs p > 0" ); }
		} else if( rule.p ) {
			problems.push_back( where + ".p: only power_sum takes p" );
		}
		if( f != "hamacher" && f != "bernoulli" && f != "velocity" && f != "power_sum" && f != "idempotent" ) {
			problems.push_back( where + ".family: unknown segment family '" + f + "'" );
		}
	}

} // namespace detail

/** Field-level diagnostics; empty when the spec is valid. */
inline std::vector< std::string > validate_spec( const OperatorSpec &spec ) {
	std::vector< std::string > problems;
	const Family f = spec.family;
	auto forbid = [&]( const auto &field, const char *name ) {
		if( field ) { problems.push_back( std::string( name ) + ": not used by " + to_string( f ) ); }
	};

	if( f == Family::hamacher || f == Family::symmetric_hamacher ) {
		if( !detail::positive_finite( spec.r ) ) { problems.push_back( "r: required, r > 0" ); }
	} else {
		forbid( spec.r, "r" );
	}
	if( f == Family::power_sum ) {
		if( !detail::positive_finite( spec.p ) ) { problems.push_back( "p: required, p > 0" ); }
	} else {
		forbid( spec.p, "p" );
	}
	if( f == Family::bayes_prior ) {
		if( !spec.s || !( *spec.s > 0 && *spec.s < 1 ) ) { problems.push_back( "s: required, 0 < s < 1" ); }
	} else {
		forbid( spec.s, "s" );
	}

	bool range_ok = spec.range.has_value();
	std::pair< double, double > bounds{ 0.0, 1.0 };
	if( spec.range ) {
		bounds = *spec.range;
		const auto [ lo, hi ] = bounds;
		if( !std::isfinite( lo ) || !std::isfinite( hi ) || !( lo < hi ) ) {
			problems.push_back( "range: needs finite lo < hi" );
			range_ok = false;
			bounds = { 0.0, 1.0 };
		} else if( auto fixed = detail::fixed_range( f ); fixed && *fixed != bounds ) {
			problems.push_back( "range: " + to_string( f ) + " is defined on [" + detail::fmt( fixed->first ) +
				", " + detail::fmt( fixed->second ) + "] only" );
		}
	}

	if( f == Family::median ) {
		if( !spec.z || !( *spec.z > bounds.first && *spec.z < bounds.second ) ) { problems.push_back( "z: required, interior to range" ); }
	} else {
		forbid( spec.z, "z" );
	}

	if( f != Family::custom_piecewise ) {
		forbid( spec.identity, "identity" );
		forbid( spec.cross, "cross" );
		if( !spec.idempotents.empty() ) { problems.push_back( "idempotents: custom_piecewise only" ); }
		if( !spec.segments.empty() ) { problems.push_back( "segments: custom_piecewise only" ); }
		return problems;
	}

	if( !range_ok ) { problems.push_back( "range: required for custom_piecewise" ); }
	if( !spec.identity ) { problems.push_back( "identity: required for custom_piecewise" ); }
	if( !range_ok || !spec.identity ) { return problems; }

	std::optional< SegmentStructure > structure;
	try {
		structure.emplace( build_segment_structure(
			Interval( bounds.first, bounds.second ), *spec.identity, spec.idempotents ) );
	} catch( const Error &err ) {
		problems.push_back( std::string( "identity/idempotents: " ) + err.what() );
		return problems;
	}
	const auto &segs = structure->segments();
	if( spec.segments.size() != segs.size() ) {
		problems.push_back( "segments: expected " + std::to_string( segs.size() ) + " rules, got " +
			std::to_string( spec.segments.size() ) );
		return problems;
	}
	for( std::size_t i = 0; i < spec.segments.size(); ++i ) {
		detail::validate_segment_rule( spec.segments[ i ], "segments[" + std::to_string( i ) + "]", problems );
	}
	if( !structure->two_sided() ) {
		forbid( spec.cross, "cross" );
		return problems;
	}
	if( !spec.cross ) {
		problems.push_back( "cross: required when the identity is interior" );
		return problems;
	}
	if( !spec.idempotents.empty() ) {
		problems.push_back( "idempotents: interior idempotents are only supported on one-sided ranges" );
		return problems;
	}
	if( *spec.cross == CrossRule::signed_generator ) {
		const SegmentRuleSpec &neg = spec.segments[ 0 ], &pos = spec.segments[ 1 ];
		if( !( neg == pos ) ) {
			problems.push_back( "segments: the signed_generator cross rule needs the same rule on both sides" );
		} else if( pos.family != "hamacher" && pos.family != "bernoulli" && pos.family != "velocity" ) {
			problems.push_back( "segments: the signed_generator cross rule needs an addition-type generator" );
		}
	}
	return problems;
}

namespace detail {

	inline Generator segment_generator( const SegmentRuleSpec &rule, const Segment &segment ) {
		if( rule.family == "hamacher" ) { return hamacher_generator( *rule.r ).rescaled( segment ); }
		if( rule.family == "bernoulli" ) { return hamacher_generator( 1.0 ).rescaled( segment ); }
		if( rule.family == "velocity" ) { return hamacher_generator( 2.0 ).rescaled( segment ); }
		return power_generator( *rule.p ).rescaled( segment );
	}

	inline Combiner::Function segment_rule( const SegmentRuleSpec &rule, const Segment &segment ) {
		if( rule.family == "idempotent" ) {
			if( segment.side() == Side::positive ) {
				return []( double a, double b ) { return std::max( a, b ); };
			}
			return []( double a, double b ) { return std::min( a, b ); };
		}
		Generator gen = segment_generator( rule, segment );
		return [gen]( double a, double b ) { return transport_combine( gen, a, b ); };
	}

	inline SignedGenerator symmetric_hamacher_generator( const Interval &range, double r ) {
		const double e = range.lo() + range.width() / 2;
		return make_signed_generator( hamacher_generator( r ).rescaled( Segment( e, range.hi(), Side::positive ) ),
			DualMap::reflection( range.lo(), e, range.hi() ), e );
	}

	inline Combiner build_custom( const OperatorSpec &spec, const Interval &range ) {
		SegmentStructure structure = build_segment_structure( range, *spec.identity, spec.idempotents );
		std::vector< Combiner::Function > rules;
		for( std::size_t i = 0; i < structure.segments().size(); ++i ) {
			rules.push_back( segment_rule( spec.segments[ i ], structure.segments()[ i ] ) );
		}
		const double e = structure.identity();

		Combiner::Function cross;
		std::optional< SignedGenerator > sg;
		if( structure.two_sided() && *spec.cross == CrossRule::signed_generator ) {
			sg.emplace( make_signed_generator(
				segment_generator( spec.segments[ 1 ], structure.segments()[ 1 ] ),
				DualMap::reflection( range.lo(), e, range.hi() ), e ) );
			cross = [sg = *sg]( double a, double b ) { return signed_combine( sg, a, b ); };
		} else {
			cross = [range, e]( double a, double b ) { return range.clamp( a + b - e ); };
		}

		Combiner::Function fn = [structure, rules, cross]( double a, double b ) {
			if( !structure.same_side( a, b ) ) { return cross( a, b ); }
			const int i = structure.segment_of( a, b );
			if( i >= 0 ) { return rules[ static_cast< std::size_t >( i ) ]( a, b ); }
			const double e_ = structure.identity();
			return ( a >= e_ && b >= e_ ) ? std::max( a, b ) : std::min( a, b );
		};

		Provenance prov{ "custom_piecewise", { { "identity", e } } };
		Combiner out( range, std::move( fn ), std::move( prov ) );
		out.with_identity( e );
		if( !structure.two_sided() ) {
			out.with_annihilator( e == range.lo() ? range.hi() : range.lo() );
		} else if( sg ) {
			out.with_annihilator( range.lo() ).with_annihilator( range.hi() );
			out.with_undefined_pair( range.lo(), range.hi() );
			out.with_dual_map( sg->dual_map() );
		}
		return out;
	}

} // namespace detail

/** Assembles a Combiner; throws SpecInvalid listing every field problem. */
inline Combiner build_operator( const OperatorSpec &spec ) {
	if( const auto problems = validate_spec( spec ); !problems.empty() ) {
		std::string msg;
		for( const auto &p : problems ) { msg += ( msg.empty() ? "" : "; " ) + p; }
		throw Error( ErrorKind::SpecInvalid, msg );
	}
	const Interval range = detail::spec_range( spec );
	const std::string name = to_string( spec.family );

	switch( spec.family ) {
		case Family::hamacher: {
			const double r = *spec.r;
			return Combiner( range, [r]( double a, double b ) { return hamacher_combine( a, b, r ); },
				Provenance{ name, { { "r", r } } } ).with_identity( 0.0 ).with_annihilator( 1.0 );
		}
		case Family::bernoulli:
			return Combiner( range, bernoulli_combine, Provenance{ name, { { "r", 1.0 } } } )
				.with_identity( 0.0 ).with_annihilator( 1.0 );
		case Family::power_sum: {
			const double p = *spec.p;
			return Combiner( range, [p]( double a, double b ) { return bounded_power_combine( a, b, p ); },
				Provenance{ name, { { "p", p } } } ).with_identity( 0.0 ).with_annihilator( 1.0 );
		}
		case Family::velocity:
		case Family::mycin: {
			Combiner::Function fn = spec.family == Family::velocity ? Combiner::Function( velocity_combine )
			                                                        : Combiner::Function( mycin_combine );
			const double r = spec.family == Family::velocity ? 2.0 : 1.0;
			return Combiner( range, std::move( fn ), Provenance{ name, { { "r", r } } } )
				.with_identity( 0.0 ).with_annihilator( -1.0 ).with_annihilator( 1.0 )
				.with_undefined_pair( -1.0, 1.0 ).with_dual_map( DualMap::reflection( -1.0, 0.0, 1.0 ) );
		}
		case Family::symmetric_hamacher: {
			const double r = *spec.r;
			SignedGenerator sg = detail::symmetric_hamacher_generator( range, r );
			DualMap f = sg.dual_map();
			const double e = sg.identity();
			return Combiner( range, [sg = std::move( sg )]( double a, double b ) { return signed_combine( sg, a, b ); },
				Provenance{ name, { { "r", r } } } )
				.with_identity( e ).with_annihilator( range.lo() ).with_annihilator( range.hi() )
				.with_undefined_pair( range.lo(), range.hi() ).with_dual_map( std::move( f ) );
		}
		case Family::median: {
			// Annihilator joint at z: every point idempotent, lo and hi act as
			// identities of their sides, z across.
			const double z = *spec.z;
			SegmentStructure lower = build_segment_structure( Interval( range.lo(), z ), range.lo(), {} );
			SegmentStructure upper = build_segment_structure( Interval( z, range.hi() ), range.hi(), {} );
			auto fn = [z, lower, upper]( double a, double b ) {
				if( a <= z && b <= z ) { return all_idempotent_combine( a, b, lower ); }
				if( a >= z && b >= z ) { return all_idempotent_combine( a, b, upper ); }
				return z;
			};
			return Combiner( range, fn, Provenance{ name, { { "z", z } } } ).with_annihilator( z );
		}
		case Family::harmonic_annihilator:
			return Combiner( range, harmonic_annihilator_combine, Provenance{ name, { { "z", 0.5 } } } )
				.with_annihilator( 0.5 ).with_singular_point( 0.5, 0.5 );
		case Family::bayes_prior: {
			const double s = *spec.s;
			return Combiner( range, [s]( double a, double b ) { return bayes_prior_combine( a, b, s ); },
				Provenance{ name, { { "s", s } } } )
				.with_identity( s ).with_annihilator( 0.0 ).with_annihilator( 1.0 ).with_undefined_pair( 0.0, 1.0 );
		}
		case Family::custom_piecewise:
			return detail::build_custom( spec, range );
	}
	throw Error( ErrorKind::SpecInvalid, "unhandled family" );
}

} // namespace evcomb

#endif // EVCOMB_OPERATORS_HPP
