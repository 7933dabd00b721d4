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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "evcomb/generators.hpp"
#include "evcomb/operators.hpp"
#include "oracles.hpp"

using namespace evcomb;

namespace {

const std::vector< double > parameters{ 0.5, 1, 2, 3, 5 };

OperatorSpec spec_of( Family f ) {
	OperatorSpec spec;
	spec.family = f;
	return spec;
}

std::vector< double > grid( double lo, double hi, int n ) {
	std::vector< double > out;
	for( int i = 0; i < n; ++i ) { out.push_back( lo + ( hi - lo ) * i / ( n - 1 ) ); }
	return out;
}

ErrorKind kind_of( auto &&fn ) {
	try {
		fn();
	} catch( const Error &err ) { return err.kind(); }
	ADD_FAILURE() << "no error thrown";
	return ErrorKind::MalformedInput;
}

} // namespace

TEST( Hamacher, Examples ) {
	EXPECT_DOUBLE_EQ( hamacher_combine( 0.5, 0.5, 1 ), 0.75 );
	EXPECT_DOUBLE_EQ( hamacher_combine( 0.5, 0.5, 2 ), 0.8 );
	EXPECT_NEAR( hamacher_combine( 0.5, 0.5, 4 ), 6.0 / 7, 1e-15 );
	for( const double r : parameters ) {
		EXPECT_EQ( hamacher_combine( 0.37, 0, r ), 0.37 );
		EXPECT_EQ( hamacher_combine( 0.37, 1, r ), 1.0 );
	}
}

TEST( Hamacher, MatchesGeneratorTransport ) {
	for( const double r : parameters ) {
		const Generator h = hamacher_generator( r );
		for( const double a : grid( 0.001, 0.999, 101 ) ) {
			for( const double b : grid( 0.001, 0.999, 101 ) ) {
				ASSERT_NEAR( hamacher_combine( a, b, r ), oracle::hamacher_transport( a, b, r ), 1e-9 );
				ASSERT_NEAR( hamacher_combine( a, b, r ), transport_combine( h, a, b ), 1e-9 );
			}
		}
	}
}

TEST( Hamacher, IncreasingInR ) {
	for( const double a : grid( 0.025, 0.975, 21 ) ) {
		for( const double b : grid( 0.025, 0.975, 21 ) ) {
			double prev = -1;
			for( const double r : parameters ) {
				const double v = hamacher_combine( a, b, r );
				EXPECT_GE( v, prev - 1e-15 );
				prev = v;
			}
		}
	}
}

TEST( Bernoulli, Examples ) {
	EXPECT_DOUBLE_EQ( bernoulli_combine( 0.3, 0.4 ), 0.58 );
	EXPECT_EQ( bernoulli_combine( 0.3, 0 ), 0.3 );
	EXPECT_EQ( bernoulli_combine( 0.3, 1 ), 1.0 );
	for( const double a : grid( 0, 1, 21 ) ) {
		for( const double b : grid( 0, 1, 21 ) ) {
			EXPECT_NEAR( bernoulli_combine( a, b ), 1 - ( 1 - a ) * ( 1 - b ), 1e-15 );
		}
	}
}

TEST( Velocity, Examples ) {
	EXPECT_DOUBLE_EQ( velocity_combine( 0.5, 0.5 ), 0.8 );
	for( const double a : grid( -0.99, 0.99, 23 ) ) {
		EXPECT_NEAR( velocity_combine( a, -a ), 0.0, 1e-15 );
		EXPECT_EQ( velocity_combine( 1, a ), 1.0 );
		EXPECT_EQ( velocity_combine( -1, a ), -1.0 );
	}
	EXPECT_EQ( kind_of( [] { velocity_combine( -1, 1 ); } ), ErrorKind::UndefinedEndpointPair );
	EXPECT_EQ( kind_of( [] { velocity_combine( 1.5, 0 ); } ), ErrorKind::OutOfRange );
}

TEST( Velocity, RelativisticForm ) {
	for( const double a : grid( -0.99, 0.99, 41 ) ) {
		for( const double b : grid( -0.99, 0.99, 41 ) ) {
			EXPECT_NEAR( velocity_combine( a, b ), ( a + b ) / ( 1 + a * b ), 1e-14 );
		}
	}
}

TEST( BoundedPower, Examples ) {
	EXPECT_EQ( bounded_power_combine( 0.5, 0.7, 1 ), 1.0 );
	EXPECT_NEAR( bounded_power_combine( 0.3, 0.4, 2 ), 0.5, 1e-15 );
	for( const double p : parameters ) { EXPECT_EQ( bounded_power_combine( 0.42, 0, p ), 0.42 ); }
	EXPECT_NEAR( bounded_power_combine( 0.2, 0.3, 1 ), 0.5, 1e-15 );
	for( const double p : parameters ) {
		for( const double a : grid( 0, 1, 21 ) ) {
			for( const double b : grid( 0, 1, 21 ) ) {
				const double expect = std::pow( std::min( std::pow( a, p ) + std::pow( b, p ), 1.0 ), 1 / p );
				EXPECT_NEAR( bounded_power_combine( a, b, p ), expect, 1e-12 );
				EXPECT_NEAR( bounded_power_combine( a, b, p ), transport_combine( power_generator( p ), a, b ), 1e-12 );
			}
		}
	}
}

TEST( Mycin, Examples ) {
	EXPECT_NEAR( mycin_combine( 0.4, 0.4 ), 0.64, 1e-15 );
	EXPECT_NEAR( mycin_combine( -0.4, 0.6 ), 1.0 / 3, 1e-15 );
	EXPECT_NEAR( mycin_combine( -0.4, -0.4 ), -0.64, 1e-15 );
	EXPECT_EQ( mycin_combine( 0.5, -0.5 ), 0.0 );
	EXPECT_EQ( kind_of( [] { mycin_combine( 1, -1 ); } ), ErrorKind::UndefinedEndpointPair );
}

TEST( Mycin, MatchesEmycinClosedForm ) {
	for( const double a : grid( -0.999, 0.999, 81 ) ) {
		for( const double b : grid( -0.999, 0.999, 81 ) ) {
			EXPECT_NEAR( mycin_combine( a, b ), oracle::emycin( a, b ), 1e-12 );
		}
	}
}

TEST( Median, Examples ) {
	EXPECT_EQ( median_combine( 0.2, 0.8, 0.5 ), 0.5 );
	EXPECT_EQ( median_combine( 0.6, 0.8, 0.5 ), 0.6 );
	EXPECT_EQ( median_combine( 0.2, 0.4, 0.5 ), 0.4 );
	for( const double a : grid( 0, 1, 31 ) ) {
		for( const double b : grid( 0, 1, 31 ) ) {
			for( const double z : { 0.1, 0.5, 0.9 } ) {
				EXPECT_EQ( median_combine( a, b, z ), oracle::median3( a, b, z ) );
			}
		}
	}
}

TEST( HarmonicAnnihilator, Examples ) {
	EXPECT_NEAR( harmonic_annihilator_combine( 0.75, 0.75 ), 0.625, 1e-15 );
	EXPECT_EQ( harmonic_annihilator_combine( 0.6, 0.3 ), 0.5 );
	EXPECT_EQ( harmonic_annihilator_combine( 0.5, 0.9 ), 0.5 );
	EXPECT_EQ( harmonic_annihilator_combine( 0.5, 0.5 ), 0.5 );
	// No identity on either side: the endpoints are not neutral.
	EXPECT_NEAR( harmonic_annihilator_combine( 1, 0.7 ), 1 - 1 / ( 4 * 0.7 ), 1e-15 );
	EXPECT_NEAR( harmonic_annihilator_combine( 0, 0.2 ), 0.3125, 1e-15 );
}

TEST( HarmonicAnnihilator, RationalFormOnEachSide ) {
	for( const double a : grid( 0.51, 1, 30 ) ) {
		for( const double b : grid( 0.51, 1, 30 ) ) {
			EXPECT_NEAR( harmonic_annihilator_combine( a, b ), ( 4 * a * b - 1 ) / ( 4 * ( a + b - 1 ) ), 1e-13 );
			EXPECT_NEAR( harmonic_annihilator_combine( 1 - a, 1 - b ),
				( 4 * ( 1 - a ) * ( 1 - b ) - 1 ) / ( 4 * ( 1 - a + 1 - b - 1 ) ), 1e-13 );
		}
	}
}

TEST( BayesPrior, Examples ) {
	EXPECT_NEAR( bayes_prior_combine( 0.5, 0.5, 0.2 ), 0.8, 1e-15 );
	EXPECT_NEAR( bayes_prior_combine( 0.5, 0.5, 0.5 ), 0.5, 1e-15 );
	EXPECT_NEAR( bayes_prior_combine( 0.5, 0.5, 0.001 ), 1 / ( 1 + 0.001 / 0.999 ), 1e-15 );
	EXPECT_NEAR( bayes_prior_combine( 0.5, 0.5, 0.001 ), 0.998999, 1e-6 );
	for( const double s : { 0.001, 0.2, 0.5, 0.9 } ) {
		for( const double a : grid( 0, 1, 21 ) ) { EXPECT_NEAR( bayes_prior_combine( a, s, s ), a, 1e-15 ); }
	}
	EXPECT_EQ( kind_of( [] { bayes_prior_combine( 0, 1, 0.2 ); } ), ErrorKind::UndefinedEndpointPair );
	EXPECT_EQ( kind_of( [] { bayes_prior_combine( 0.3, 0.4, 1 ); } ), ErrorKind::PriorOutOfRange );
}

TEST( BayesPrior, OddsProductOracle ) {
	for( const double s : { 0.001, 0.2, 0.5 } ) {
		for( const double a : grid( 0.05, 0.95, 19 ) ) {
			for( const double b : grid( 0.05, 0.95, 19 ) ) {
				EXPECT_NEAR( bayes_prior_combine( a, b, s ), oracle::bayes_odds( { a, b }, s ), 1e-12 );
			}
		}
	}
}

TEST( Family, NamesRoundTrip ) {
	for( const auto &[ family, name ] : family_names() ) {
		EXPECT_EQ( to_string( family ), name );
		EXPECT_EQ( parse_family( name ), family );
	}
	EXPECT_FALSE( parse_family( "dempster" ).has_value() );
}

TEST( BuildOperator, ShippedFamiliesDeclareStructure ) {
	const Combiner bern = build_operator( spec_of( Family::bernoulli ) );
	EXPECT_EQ( bern.identity(), 0.0 );
	EXPECT_EQ( bern.annihilators(), std::vector< double >{ 1.0 } );
	EXPECT_DOUBLE_EQ( bern( 0.3, 0.4 ), 0.58 );

	const Combiner vel = build_operator( spec_of( Family::velocity ) );
	EXPECT_EQ( vel.interval(), Interval( -1, 1 ) );
	EXPECT_FALSE( vel.defined( -1, 1 ) );
	EXPECT_FALSE( vel.defined( 1, -1 ) );
	EXPECT_TRUE( vel.dual_map().has_value() );
	EXPECT_EQ( kind_of( [&] { vel( 1, -1 ); } ), ErrorKind::UndefinedEndpointPair );

	OperatorSpec med = spec_of( Family::median );
	med.z = 0.5;
	const Combiner m = build_operator( med );
	EXPECT_FALSE( m.identity().has_value() );
	EXPECT_EQ( m.annihilators(), std::vector< double >{ 0.5 } );

	OperatorSpec bayes = spec_of( Family::bayes_prior );
	bayes.s = 0.2;
	const Combiner b = build_operator( bayes );
	EXPECT_EQ( b.identity(), 0.2 );
	EXPECT_NEAR( b( 0.5, 0.5 ), 0.8, 1e-15 );

	const Combiner harm = build_operator( spec_of( Family::harmonic_annihilator ) );
	EXPECT_EQ( harm.annihilators(), std::vector< double >{ 0.5 } );
	EXPECT_TRUE( harm.near_excluded( 0.5 + 1e-7, 0.5, 1e-6 ) );
}

TEST( BuildOperator, SymmetricHamacherCollapses ) {
	OperatorSpec spec = spec_of( Family::symmetric_hamacher );
	spec.range = { -1, 1 };
	spec.r = 2;
	const Combiner two = build_operator( spec );
	spec.r = 1;
	const Combiner one = build_operator( spec );
	for( const double a : grid( -0.999, 0.999, 201 ) ) {
		for( const double b : grid( -0.999, 0.999, 201 ) ) {
			ASSERT_NEAR( two( a, b ), ( a + b ) / ( 1 + a * b ), 1e-12 );
			ASSERT_NEAR( two( a, b ), velocity_combine( a, b ), 1e-12 );
			ASSERT_NEAR( one( a, b ), mycin_combine( a, b ), 1e-12 );
		}
	}
}

// The four-branch closed form for general r against the signed-generator route.
TEST( BuildOperator, SymmetricHamacherGeneralR ) {
	OperatorSpec spec = spec_of( Family::symmetric_hamacher );
	spec.range = { -1, 1 };
	for( const double r : parameters ) {
		spec.r = r;
		const Combiner c = build_operator( spec );
		for( const double a : grid( -0.99, 0.99, 67 ) ) {
			for( const double b : grid( -0.99, 0.99, 67 ) ) {
				ASSERT_NEAR( c( a, b ), oracle::signed_transport( a, b, r ), 1e-12 ) << r << " " << a << " " << b;
				ASSERT_NEAR( c( a, b ), oracle::symmetric_hamacher_display( a, b, r ), 1e-12 );
			}
		}
	}
}

TEST( BuildOperator, MedianEqualsClosedForm ) {
	OperatorSpec spec = spec_of( Family::median );
	spec.z = 0.5;
	spec.range = { 0, 1 };
	const Combiner c = build_operator( spec );
	for( const double a : grid( 0, 1, 101 ) ) {
		for( const double b : grid( 0, 1, 101 ) ) { ASSERT_EQ( c( a, b ), median_combine( a, b, 0.5 ) ); }
	}
}

TEST( BuildOperator, CustomPiecewiseWithSignedCross ) {
	OperatorSpec spec = spec_of( Family::custom_piecewise );
	spec.range = { -1, 1 };
	spec.identity = 0;
	spec.segments = { { "hamacher", 1, std::nullopt }, { "hamacher", 1, std::nullopt } };
	spec.cross = CrossRule::signed_generator;
	const Combiner c = build_operator( spec );
	for( const double a : grid( -0.99, 0.99, 45 ) ) {
		for( const double b : grid( -0.99, 0.99, 45 ) ) { ASSERT_NEAR( c( a, b ), mycin_combine( a, b ), 1e-12 ); }
	}
}

TEST( BuildOperator, CustomPiecewiseAdditiveCrossIsOriginalRule ) {
	OperatorSpec spec = spec_of( Family::custom_piecewise );
	spec.range = { -1, 1 };
	spec.identity = 0;
	spec.segments = { { "bernoulli", std::nullopt, std::nullopt }, { "bernoulli", std::nullopt, std::nullopt } };
	spec.cross = CrossRule::additive;
	const Combiner c = build_operator( spec );
	for( const double a : grid( -0.95, 0.95, 39 ) ) {
		for( const double b : grid( -0.95, 0.95, 39 ) ) { ASSERT_NEAR( c( a, b ), oracle::original_mycin( a, b ), 1e-12 ); }
	}
}

TEST( BuildOperator, CustomPiecewiseInteriorIdempotent ) {
	OperatorSpec spec = spec_of( Family::custom_piecewise );
	spec.range = { 0, 1 };
	spec.identity = 0;
	spec.idempotents = { 0.5 };
	spec.segments = { { "hamacher", 2, std::nullopt }, { "power_sum", std::nullopt, 1 } };
	const Combiner c = build_operator( spec );
	EXPECT_EQ( c( 0.3, 0.7 ), 0.7 );
	EXPECT_EQ( c( 0.5, 0.5 ), 0.5 );
	EXPECT_EQ( c( 0.5, 0.2 ), 0.5 );
	// [0, 0.5] with r = 2 in normalized coordinates: t = 0.5 each gives 0.8.
	EXPECT_NEAR( c( 0.25, 0.25 ), 0.4, 1e-12 );
	// [0.5, 1] as a bounded sum saturates at its top.
	EXPECT_EQ( c( 0.8, 0.8 ), 1.0 );
	EXPECT_NEAR( c( 0.6, 0.7 ), 0.8, 1e-12 );
}

TEST( ValidateSpec, Diagnostics ) {
	auto problems = [&]( const OperatorSpec &s ) { return validate_spec( s ); };
	EXPECT_TRUE( problems( spec_of( Family::bernoulli ) ).empty() );

	OperatorSpec h = spec_of( Family::hamacher );
	EXPECT_FALSE( problems( h ).empty() );
	h.r = -1;
	EXPECT_FALSE( problems( h ).empty() );
	h.r = 3;
	EXPECT_TRUE( problems( h ).empty() );
	h.range = { -1, 1 };
	EXPECT_FALSE( problems( h ).empty() );

	OperatorSpec med = spec_of( Family::median );
	med.z = 1;
	EXPECT_FALSE( problems( med ).empty() );

	OperatorSpec bayes = spec_of( Family::bayes_prior );
	bayes.s = 1.2;
	EXPECT_FALSE( problems( bayes ).empty() );

	OperatorSpec custom = spec_of( Family::custom_piecewise );
	EXPECT_FALSE( problems( custom ).empty() );
	custom.range = { -1, 1 };
	custom.identity = 0;
	custom.segments = { { "hamacher", 1, std::nullopt }, { "bernoulli", std::nullopt, std::nullopt } };
	custom.cross = CrossRule::signed_generator;
	EXPECT_FALSE( problems( custom ).empty() );
	custom.segments = { { "hamacher", 1, std::nullopt } };
	EXPECT_FALSE( problems( custom ).empty() );
	custom.segments = { { "frank", std::nullopt, std::nullopt }, { "frank", std::nullopt, std::nullopt } };
	EXPECT_FALSE( problems( custom ).empty() );

	OperatorSpec bad = spec_of( Family::velocity );
	bad.r = 1;
	EXPECT_EQ( kind_of( [&] { build_operator( bad ); } ), ErrorKind::SpecInvalid );
}
