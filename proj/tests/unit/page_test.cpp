#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "mathwb/mathml.hpp"
#include "mathwb/page.hpp"
#include "testing.hpp"

namespace mathwb::page {
namespace {

class FixturePage : public ::testing::Test {
protected:
    static void SetUpTestSuite() { store_ = new kb::Snapshot(kb::load_snapshot(testing::snapshot_fixture())); }
    static void TearDownTestSuite() {
        delete store_;
        store_ = nullptr;
    }
    static kb::Snapshot* store_;
};

kb::Snapshot* FixturePage::store_ = nullptr;

PageError page_error(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const PageError& e) {
        return e;
    }
    ADD_FAILURE() << "no PageError";
    return PageError(PageErrorCode::UnknownQid, "");
}

TEST_F(FixturePage, MassEnergyEquivalence) {
    const PageModel m = build_page_model(Qid::from("Q35875"), "en", *store_);
    EXPECT_EQ(m.label, (kb::LocalizedText{"mass–energy equivalence", "en"}));
    EXPECT_EQ(m.formula_tex, "E=mc^2");
    EXPECT_EQ(m.formula_mathml, mathml::render_mathml(tex::parse("E=mc^2")));
    EXPECT_EQ(m.formula_alt_text, "E equals m c to the power 2");
    EXPECT_EQ(m.type_label, (kb::LocalizedText{"physical law or identity", "en"}));
    ASSERT_EQ(m.parts.size(), 3u);
    const char* frags[] = {"E", "m", "c"};
    const char* qids[] = {"Q11379", "Q11423", "Q2111"};
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(m.parts[i].fragment_tex, frags[i]);
        EXPECT_EQ(m.parts[i].part_qid, Qid::from(qids[i]));
        EXPECT_EQ(m.parts[i].matches.size(), 1u);
        ASSERT_TRUE(m.parts[i].article);
        EXPECT_EQ(m.parts[i].article->via, kb::LinkVia::Direct);
        EXPECT_EQ(testing::check_mathml(m.parts[i].fragment_mathml), "");
    }
    EXPECT_EQ(m.parts[2].matches[0], (matcher::MatchPosition{{3, 0}, 1}));
    EXPECT_EQ(m.parts[2].label->text, "speed of light");
}

TEST_F(FixturePage, UnavailableLanguageFallsBack) {
    const PageModel en = build_page_model(Qid::from("Q35875"), "en", *store_);
    PageModel xx = build_page_model(Qid::from("Q35875"), "xx", *store_);
    EXPECT_EQ(xx.lang, "xx");
    EXPECT_EQ(xx.label.lang, "en");
    xx.lang = "en";
    EXPECT_EQ(xx, en);
}

TEST_F(FixturePage, GermanLabelsWherePresent) {
    const PageModel de = build_page_model(Qid::from("Q35875"), "de", *store_);
    EXPECT_EQ(de.label, (kb::LocalizedText{"Äquivalenz von Masse und Energie", "de"}));
    EXPECT_EQ(de.description->lang, "en");
    EXPECT_EQ(de.parts[0].label, (kb::LocalizedText{"Energie", "de"}));
}

TEST_F(FixturePage, SubclassFallbackLink) {
    const PageModel m = build_page_model(Qid::from("Q1899432"), "en", *store_);
    ASSERT_EQ(m.parts.size(), 7u);
    int scheme_rows = 0;
    for (const auto& row : m.parts) {
        EXPECT_FALSE(row.matches.empty()) << row.fragment_tex;
        if (row.part_qid != Qid::from("Q85397895")) continue;
        ++scheme_rows;
        ASSERT_TRUE(row.article);
        EXPECT_EQ(row.article->via, kb::LinkVia::Subclass);
        EXPECT_EQ(row.article->target, Qid::from("Q90000030"));
    }
    EXPECT_EQ(scheme_rows, 2);
    EXPECT_EQ(m.parts[0].article->url_path, "/wiki/Chern_class#Chern_character");
}

TEST_F(FixturePage, Errors) {
    EXPECT_EQ(page_error([&] { build_page_model(Qid::from("Q1"), "en", *store_); }).code(), PageErrorCode::UnknownQid);
    EXPECT_EQ(page_error([&] { build_page_model(Qid::from("Q2111"), "en", *store_); }).code(),
              PageErrorCode::NoDefiningFormula);
}

TEST_F(FixturePage, FallbackSourceConsulted) {
    PageOptions options;
    options.fallback = [](const Qid& q) -> std::optional<kb::Item> {
        if (q != Qid::from("Q5")) return std::nullopt;
        kb::Item item{q, {{"fr", "cinq"}}, {}, {}, "x+y", {{Qid::from("Q11423"), "x"}}, {}, {}};
        return item;
    };
    const PageModel m = build_page_model(Qid::from("Q5"), "en", *store_, options);
    EXPECT_EQ(m.label, (kb::LocalizedText{"cinq", "fr"}));
    EXPECT_EQ(m.parts[0].label->text, "mass");
}

TEST_F(FixturePage, LanguageTotality) {
    const char* langs[] = {"en", "de", "fr", "xx", "zh-hans", "pt-br", "ja"};
    for (const auto& [qid, item] : store_->items()) {
        if (item.labels.empty() || !item.defining_formula) continue;
        for (const char* lang : langs) {
            const PageModel m = build_page_model(qid, lang, *store_);
            EXPECT_FALSE(m.label.lang.empty());
            for (const auto& row : m.parts) {
                const kb::Item* part = store_->get_item(row.part_qid);
                if (part && !part->labels.empty()) {
                    EXPECT_TRUE(row.label);
                }
            }
        }
    }
}

TEST_F(FixturePage, PartsOrderAndWhitelist) {
    for (const auto& [qid, item] : store_->items()) {
        if (!item.defining_formula) continue;
        const PageModel m = build_page_model(qid, "en", *store_);
        EXPECT_EQ(testing::check_mathml(m.formula_mathml), "");
        ASSERT_EQ(m.parts.size(), item.parts.size());
        for (std::size_t i = 0; i < m.parts.size(); ++i) {
            EXPECT_EQ(m.parts[i].part_qid, item.parts[i].part_qid);
            EXPECT_EQ(m.parts[i].fragment_tex, item.parts[i].fragment);
        }
    }
}

TEST_F(FixturePage, JsonShape) {
    const auto j = page_to_json(build_page_model(Qid::from("Q35875"), "en", *store_));
    EXPECT_EQ(j["qid"], "Q35875");
    EXPECT_EQ(j["lang"], "en");
    EXPECT_EQ(j["label"], "mass–energy equivalence");
    EXPECT_EQ(j["label_lang"], "en");
    EXPECT_EQ(j["parts"].size(), 3u);
    EXPECT_EQ(j["parts"][2]["matches"][0]["path"], nlohmann::json::parse("[3,0]"));
    EXPECT_EQ(j["parts"][2]["article"]["via"], "direct");
    const auto sub = page_to_json(build_page_model(Qid::from("Q1899432"), "en", *store_));
    EXPECT_EQ(sub["parts"][4]["article"]["via"], "subclass");
    EXPECT_EQ(sub["parts"][4]["article"]["target_qid"], "Q90000030");
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TEST_F(FixturePage, HtmlGolden) {
    const std::string html = render_page_html(build_page_model(Qid::from("Q35875"), "en", *store_));
    const auto golden = testing::source_dir() / "tests" / "golden" / "page_Q35875_en.html";
    ASSERT_TRUE(std::filesystem::exists(golden));
    EXPECT_EQ(html, read_file(golden));
}

TEST_F(FixturePage, HtmlContent) {
    const PageModel m = build_page_model(Qid::from("Q35875"), "en", *store_);
    const std::string html = render_page_html(m);
    EXPECT_NE(html.find("<h1 lang=\"en\">mass–energy equivalence</h1>"), std::string::npos);
    EXPECT_NE(html.find("<math alttext=\"E equals m c to the power 2\"><mrow>"), std::string::npos);
    std::size_t rows = 0;
    for (std::size_t at = html.find("<tr><td>"); at != std::string::npos; at = html.find("<tr><td>", at + 1)) ++rows;
    EXPECT_EQ(rows, 3u);
    EXPECT_NE(html.find("<a href=\"/wiki/Speed_of_light\">speed of light</a>"), std::string::npos);
}

TEST_F(FixturePage, HtmlEmptyStateAndPlainLabels) {
    PageModel m = build_page_model(Qid::from("Q35875"), "en", *store_);
    m.parts.clear();
    const std::string empty = render_page_html(m);
    EXPECT_NE(empty.find("No elements of this formula are annotated."), std::string::npos);
    EXPECT_EQ(empty.find("<table"), std::string::npos);

    const std::string grr = render_page_html(build_page_model(Qid::from("Q1899432"), "en", *store_));
    EXPECT_NE(grr.find(">complex of coherent sheaves</td>"), std::string::npos);
    EXPECT_EQ(grr.find(">complex of coherent sheaves</a>"), std::string::npos);
}

TEST_F(FixturePage, HtmlEscapesText) {
    PageModel m = build_page_model(Qid::from("Q35875"), "en", *store_);
    m.label.text = "<b>&\"bold\"";
    const std::string html = render_page_html(m);
    EXPECT_EQ(html.find("<b>"), std::string::npos);
    EXPECT_NE(html.find("&lt;b&gt;&amp;&quot;bold&quot;"), std::string::npos);
}

TEST_F(FixturePage, JsonAndHtmlCarryIdenticalStrings) {
    for (const auto& [qid, item] : store_->items()) {
        if (!item.defining_formula) continue;
        for (const char* lang : {"en", "de", "xx"}) {
            const PageModel m = build_page_model(qid, lang, *store_);
            const auto j = page_to_json(m);
            const std::string html = render_page_html(m);
            auto check = [&](const nlohmann::ordered_json& v) {
                if (v.is_string()) {
                    EXPECT_NE(html.find(mathml::xml_escape(v.get<std::string>())), std::string::npos)
                        << qid.str() << " " << v;
                }
            };
            check(j["label"]);
            check(j["description"]);
            check(j["type_label"]);
            for (const auto& row : j["parts"]) {
                check(row["label"]);
                check(row["description"]);
            }
        }
    }
}

}  // namespace
}  // namespace mathwb::page
