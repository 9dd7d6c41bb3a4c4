#include "mathwb/page.hpp"

#include "mathwb/mathml.hpp"

namespace mathwb::page {

using nlohmann::ordered_json;

namespace {

std::optional<kb::Item> find_item(const Qid& qid, const kb::Snapshot& store, const PageOptions& options) {
    if (const kb::Item* item = store.get_item(qid)) return *item;
    if (options.fallback) return options.fallback(qid);
    return std::nullopt;
}

}  // namespace

PageModel build_page_model(const Qid& qid, std::string_view lang, const kb::Snapshot& store,
                           const PageOptions& options) {
    const std::optional<kb::Item> item = find_item(qid, store, options);
    if (!item) throw PageError(PageErrorCode::UnknownQid, "unknown qid " + qid.str());
    if (!item->defining_formula) {
        throw PageError(PageErrorCode::NoDefiningFormula, qid.str() + " has no defining formula");
    }

    const tex::FormulaAst formula = tex::parse(*item->defining_formula);
    const mathml::RenderedFormula rendered = mathml::render(formula);

    PageModel model{qid,
                    std::string(lang),
                    *item->defining_formula,
                    rendered.mathml,
                    rendered.alt_text,
                    kb::pick_language(item->labels, lang).value_or(kb::LocalizedText{qid.str(), ""}),
                    kb::description_for(*item, lang),
                    std::nullopt,
                    {}};

    if (!item->instance_of.empty()) {
        if (auto type = find_item(item->instance_of.front(), store, options)) {
            model.type_label = kb::pick_language(type->labels, lang);
        }
    }

    for (auto& pm : matcher::annotate_formula(formula, item->parts)) {
        PartRow row{pm.part.part_qid,
                    pm.part.fragment,
                    mathml::render_mathml(tex::parse(pm.part.fragment)),
                    std::nullopt,
                    std::nullopt,
                    std::nullopt,
                    std::move(pm.matches)};
        if (auto part = find_item(pm.part.part_qid, store, options)) {
            row.label = kb::pick_language(part->labels, lang);
            row.description = kb::description_for(*part, lang);
            row.article = kb::resolve_article_link(*part, options.wiki, store);
        }
        model.parts.push_back(std::move(row));
    }
    return model;
}

namespace {

void put_text(ordered_json& j, const std::string& key, const std::optional<kb::LocalizedText>& t) {
    if (t) {
        j[key] = t->text;
        j[key + "_lang"] = t->lang;
    } else {
        j[key] = nullptr;
        j[key + "_lang"] = nullptr;
    }
}

}  // namespace

ordered_json page_to_json(const PageModel& model) {
    ordered_json j;
    j["qid"] = model.qid.str();
    j["lang"] = model.lang;
    j["formula_tex"] = model.formula_tex;
    j["formula_mathml"] = model.formula_mathml;
    j["formula_alt_text"] = model.formula_alt_text;
    put_text(j, "label", model.label);
    put_text(j, "description", model.description);
    put_text(j, "type_label", model.type_label);
    j["parts"] = ordered_json::array();
    for (const auto& row : model.parts) {
        ordered_json r;
        r["part_qid"] = row.part_qid.str();
        r["fragment_tex"] = row.fragment_tex;
        r["fragment_mathml"] = row.fragment_mathml;
        put_text(r, "label", row.label);
        put_text(r, "description", row.description);
        if (row.article) {
            r["article"] = ordered_json{{"url_path", row.article->url_path},
                                        {"via", row.article->via == kb::LinkVia::Direct ? "direct" : "subclass"},
                                        {"target_qid", row.article->target.str()}};
        } else {
            r["article"] = nullptr;
        }
        r["matches"] = ordered_json::array();
        for (const auto& m : row.matches) r["matches"].push_back(ordered_json{{"path", m.path}, {"length", m.length}});
        j["parts"].push_back(std::move(r));
    }
    return j;
}

namespace {

// MathML with alt text attached for assistive technology.
std::string inline_math(const std::string& mathml, const std::string& alt) {
    const std::string_view open = "<math";
    if (mathml.compare(0, open.size(), open) != 0) return mathml;
    return "<math alttext=\"" + mathml::xml_escape(alt) + "\"" + mathml.substr(open.size());
}

std::string lang_attr(const std::optional<kb::LocalizedText>& t) {
    if (!t || t->lang.empty()) return {};
    return " lang=\"" + mathml::xml_escape(t->lang) + "\"";
}

}  // namespace

std::string render_page_html(const PageModel& model) {
    using mathml::xml_escape;
    std::string h;
    h += "<!DOCTYPE html>\n";
    h += "<html lang=\"" + xml_escape(model.lang) + "\">\n<head>\n<meta charset=\"utf-8\">\n";
    h += "<title>" + xml_escape(model.label.text) + " (" + model.qid.str() + ")</title>\n";
    h += "<style>body{font-family:sans-serif;max-width:48em;margin:2em auto}"
         "table{border-collapse:collapse}td,th{border:1px solid #ccc;padding:.3em .6em;text-align:left}"
         ".formula{font-size:1.6em;margin:1em 0}</style>\n";
    h += "</head>\n<body>\n";
    h += "<h1" + lang_attr(model.label) + ">" + xml_escape(model.label.text) + "</h1>\n";
    h += "<div class=\"formula\">" + inline_math(model.formula_mathml, model.formula_alt_text) + "</div>\n";
    h += "<p class=\"alt-text\">" + xml_escape(model.formula_alt_text) + "</p>\n";
    if (model.description) {
        h += "<p class=\"description\"" + lang_attr(model.description) + ">" + xml_escape(model.description->text) +
             "</p>\n";
    }
    if (model.type_label) {
        h += "<p class=\"type\">Type: <span" + lang_attr(model.type_label) + ">" +
             xml_escape(model.type_label->text) + "</span></p>\n";
    }
    if (model.parts.empty()) {
        h += "<p class=\"no-parts\">No elements of this formula are annotated.</p>\n";
    } else {
        h += "<table class=\"parts\">\n<tr><th>Symbol</th><th>Item</th><th>Description</th></tr>\n";
        for (const auto& row : model.parts) {
            const std::string name = row.label ? xml_escape(row.label->text) : row.part_qid.str();
            h += "<tr><td>" + row.fragment_mathml + "</td><td" + lang_attr(row.label) + ">";
            if (row.article) {
                h += "<a href=\"" + xml_escape(row.article->url_path) + "\">" + name + "</a>";
            } else {
                h += name;
            }
            h += "</td><td" + lang_attr(row.description) + ">" +
                 (row.description ? xml_escape(row.description->text) : std::string()) + "</td></tr>\n";
        }
        h += "</table>\n";
    }
    h += "</body>\n</html>\n";
    return h;
}

}  // namespace mathwb::page
