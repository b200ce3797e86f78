#ifndef LEXADAPT_LEXADAPT_HPP_
#define LEXADAPT_LEXADAPT_HPP_

#include "lexadapt/corpus_stats.hpp"
#include "lexadapt/domain_analysis.hpp"
#include "lexadapt/embedding_store.hpp"
#include "lexadapt/error.hpp"
#include "lexadapt/evaluation.hpp"
#include "lexadapt/lexicons.hpp"
#include "lexadapt/pipeline.hpp"
#include "lexadapt/sentiment.hpp"
#include "lexadapt/sentiment_adaptation.hpp"
#include "lexadapt/text_io.hpp"
#include "lexadapt/transfer_prep.hpp"

#endif  // LEXADAPT_LEXADAPT_HPP_
