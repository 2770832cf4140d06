#include <fstream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "zonerec/text.hpp"

using namespace zonerec;

namespace {

// Expected stems come from NLTK's PorterStemmer in ORIGINAL_ALGORITHM mode.
const std::vector<std::pair<std::string, std::string>> kStemCases = {
    {"caresses", "caress"},
    {"ponies", "poni"},
    {"ties", "ti"},
    {"caress", "caress"},
    {"cats", "cat"},
    {"feed", "feed"},
    {"agreed", "agre"},
    {"plastered", "plaster"},
    {"bled", "bled"},
    {"motoring", "motor"},
    {"sing", "sing"},
    {"conflated", "conflat"},
    {"troubled", "troubl"},
    {"sized", "size"},
    {"hopping", "hop"},
    {"tanned", "tan"},
    {"falling", "fall"},
    {"hissing", "hiss"},
    {"fizzed", "fizz"},
    {"failing", "fail"},
    {"filing", "file"},
    {"happy", "happi"},
    {"sky", "sky"},
    {"relational", "relat"},
    {"conditional", "condit"},
    {"rational", "ration"},
    {"valenci", "valenc"},
    {"hesitanci", "hesit"},
    {"digitizer", "digit"},
    {"conformabli", "conform"},
    {"radicalli", "radic"},
    {"differentli", "differ"},
    {"vileli", "vile"},
    {"analogousli", "analog"},
    {"vietnamization", "vietnam"},
    {"predication", "predic"},
    {"operator", "oper"},
    {"feudalism", "feudal"},
    {"decisiveness", "decis"},
    {"hopefulness", "hope"},
    {"callousness", "callous"},
    {"formaliti", "formal"},
    {"sensitiviti", "sensit"},
    {"sensibiliti", "sensibl"},
    {"triplicate", "triplic"},
    {"formative", "form"},
    {"formalize", "formal"},
    {"electriciti", "electr"},
    {"electrical", "electr"},
    {"hopeful", "hope"},
    {"goodness", "good"},
    {"revival", "reviv"},
    {"allowance", "allow"},
    {"inference", "infer"},
    {"airliner", "airlin"},
    {"gyroscopic", "gyroscop"},
    {"adjustable", "adjust"},
    {"defensible", "defens"},
    {"irritant", "irrit"},
    {"replacement", "replac"},
    {"adjustment", "adjust"},
    {"dependent", "depend"},
    {"adoption", "adopt"},
    {"communism", "commun"},
    {"activate", "activ"},
    {"angulariti", "angular"},
    {"homologous", "homolog"},
    {"effective", "effect"},
    {"bowdlerize", "bowdler"},
    {"probate", "probat"},
    {"rate", "rate"},
    {"cease", "ceas"},
    {"controll", "control"},
    {"roll", "roll"},
    {"generalizations", "gener"},
    {"oscillators", "oscil"},
    {"noodles", "noodl"},
    {"cars", "car"},
    {"coffee", "coffe"},
    {"theatre", "theatr"},
    {"restaurant", "restaur"},
    {"restaurants", "restaur"},
    {"dining", "dine"},
    {"dined", "dine"},
    {"cafes", "cafe"},
    {"bakeries", "bakeri"},
    {"seafood", "seafood"},
    {"hawker", "hawker"},
    {"delicious", "delici"},
    {"spicy", "spici"},
    {"flavours", "flavour"},
    {"serving", "serv"},
    {"served", "serv"},
    {"authentic", "authent"},
    {"traditional", "tradit"},
    {"generously", "gener"},
    {"knives", "knive"},
    {"agreement", "agreement"},
    {"abilities", "abil"},
};

}  // namespace

TEST(PorterStemmer, MatchesReferenceImplementation) {
  for (const auto& [word, stem] : kStemCases) EXPECT_EQ(porter_stem(word), stem) << word;
}

TEST(PorterStemmer, NoShortWordExemption) {
  EXPECT_EQ(porter_stem("a"), "a");
  EXPECT_EQ(porter_stem("is"), "i");
  EXPECT_EQ(porter_stem("was"), "wa");
  EXPECT_EQ(porter_stem(""), "");
}

TEST(Stopwords, HeaderMatchesDataFile) {
  std::ifstream in(std::string(ZONEREC_SOURCE_DIR) + "/data/stopwords.txt");
  ASSERT_TRUE(in);
  std::vector<std::string> file_words;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    file_words.push_back(line);
  }
  ASSERT_EQ(file_words.size(), kStopwords.size());
  for (std::size_t i = 0; i < file_words.size(); ++i) EXPECT_EQ(file_words[i], kStopwords[i]);
  EXPECT_EQ(std::set<std::string>(file_words.begin(), file_words.end()).size(), 175u);
}

TEST(Stopwords, Lookup) {
  EXPECT_TRUE(is_stopword("the"));
  EXPECT_TRUE(is_stopword("would"));
  EXPECT_FALSE(is_stopword("noodle"));
  EXPECT_FALSE(is_stopword("The"));
}

TEST(CleanText, PipelineOrder) {
  EXPECT_EQ(clean_text("The BEST noodles in town!"), (std::vector<std::string>{"best", "noodl", "town"}));
  EXPECT_EQ(clean_text("cars car"), (std::vector<std::string>{"car", "car"}));
}

TEST(CleanText, DropsWordsContainingDigits) {
  EXPECT_EQ(clean_text("open 24hours since 1999 covid19 noodles"),
            (std::vector<std::string>{"open", "sinc", "noodl"}));
}

TEST(CleanText, SplitsOnPunctuation) {
  EXPECT_EQ(clean_text("fish-ball, prawn/crab"), (std::vector<std::string>{"fish", "ball", "prawn", "crab"}));
  EXPECT_EQ(clean_text("caf\xC3\xA9"), (std::vector<std::string>{"caf"}));
}

TEST(CleanText, EmptyAndStopwordOnly) {
  EXPECT_TRUE(clean_text("").empty());
  EXPECT_TRUE(clean_text("   \t\n").empty());
  EXPECT_TRUE(clean_text("the and of it").empty());
}

TEST(CleanText, OutputInvariants) {
  const auto tokens = clean_text("Our Family-Run KOPITIAM serves 3 kinds of Kaya Toast & Teh Tarik since the 1980s!!");
  ASSERT_FALSE(tokens.empty());
  for (const auto& t : tokens) {
    EXPECT_FALSE(is_stopword(t)) << t;
    for (char c : t) {
      EXPECT_TRUE(c >= 'a' && c <= 'z') << t;
    }
  }
}

TEST(CountWords, Whitespace) {
  EXPECT_EQ(count_words(""), 0u);
  EXPECT_EQ(count_words("  one two\tthree\nfour  "), 4u);
  EXPECT_EQ(count_words("a, b"), 2u);
}

TEST(CleanCategory, JoinsWords) {
  EXPECT_EQ(clean_category("Coffee Shop"), "coffee_shop");
  EXPECT_EQ(clean_category("Restaurants"), "restaur");
  EXPECT_EQ(clean_category("Bar & Grill"), "bar_gril");
  EXPECT_FALSE(clean_category("The").has_value());
  EXPECT_FALSE(clean_category("").has_value());
  EXPECT_EQ(clean_categories({"Cafe", "", "Food Court"}), (std::vector<std::string>{"cafe", "food_court"}));
}
