//! Byte-deterministic SVG 1.1 serialization of panel documents.
//!
//! Every coordinate is printed with exactly three decimals and clip paths are
//! numbered in draw order, so identical documents always produce identical
//! bytes.

use alloc::string::String;
use core::fmt::Write;

use crate::balloon::Balloon;
use crate::document::{DrawItem, ImageItem, PanelDocument};
use crate::geometry::Rect;
use crate::raster::Rgba;

const METADATA_NS: &str = "urn:panelforge:metadata";

/// Fixed three-decimal formatting without negative zero.
pub struct Num(pub f64);

impl core::fmt::Display for Num {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let mut v = libm::round(self.0 * 1000.0) / 1000.0;
        if v == 0.0 {
            v = 0.0;
        }
        write!(f, "{v:.3}")
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

pub fn to_svg(doc: &PanelDocument) -> String {
    let mut w = SvgWriter { out: String::new(), next_clip: 0 };
    w.out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
    let _ = writeln!(
        w.out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" xmlns:xlink=\"http://www.w3.org/1999/xlink\" \
         version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        Num(doc.width),
        Num(doc.height),
        Num(doc.width),
        Num(doc.height)
    );
    w.body(doc);
    w.out.push_str("</svg>\n");
    w.out
}

struct SvgWriter {
    out: String,
    next_clip: usize,
}

impl SvgWriter {
    fn body(&mut self, doc: &PanelDocument) {
        self.metadata(doc);
        if let Some(bg) = doc.background {
            let _ = writeln!(
                self.out,
                "<rect class=\"background\" x=\"0.000\" y=\"0.000\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
                Num(doc.width),
                Num(doc.height),
                bg.hex()
            );
        }
        for item in &doc.items {
            match item {
                DrawItem::Image(im) => self.image(im),
                DrawItem::Balloon(b) => self.balloon(b),
                DrawItem::Outline { rect, width } => self.outline(rect, *width),
                DrawItem::Inset { rect, doc } => {
                    let _ = writeln!(
                        self.out,
                        "<svg x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" preserveAspectRatio=\"none\">",
                        Num(rect.x),
                        Num(rect.y),
                        Num(rect.w),
                        Num(rect.h),
                        Num(doc.width),
                        Num(doc.height)
                    );
                    self.body(doc);
                    self.out.push_str("</svg>\n");
                }
            }
        }
    }

    fn metadata(&mut self, doc: &PanelDocument) {
        let meta = &doc.metadata;
        if meta.view_param.is_none() && meta.credits.is_empty() {
            return;
        }
        let _ = write!(self.out, "<metadata><pf:panel xmlns:pf=\"{METADATA_NS}\"");
        if let Some(u) = meta.view_param {
            let _ = write!(self.out, " u=\"{}\"", Num(u));
        }
        self.out.push('>');
        for c in &meta.credits {
            let _ = write!(
                self.out,
                "<pf:credit asset=\"{}\" name=\"{}\" creator=\"{}\"",
                escape(&c.asset_id),
                escape(&c.name),
                escape(&c.creator)
            );
            if let Some(url) = &c.url {
                let _ = write!(self.out, " href=\"{}\"", escape(url));
            }
            self.out.push_str("/>");
        }
        self.out.push_str("</pf:panel></metadata>\n");
    }

    fn image(&mut self, im: &ImageItem) {
        let id = self.next_clip;
        self.next_clip += 1;
        let c = &im.clip;
        let _ = writeln!(
            self.out,
            "<defs><clipPath id=\"clip-{id}\"><rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/></clipPath></defs>",
            Num(c.x),
            Num(c.y),
            Num(c.w),
            Num(c.h)
        );
        let r = &im.rect;
        let _ = write!(
            self.out,
            "<g clip-path=\"url(#clip-{id})\"><image class=\"character\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" preserveAspectRatio=\"none\"",
            Num(r.x),
            Num(r.y),
            Num(r.w),
            Num(r.h)
        );
        if im.flip {
            let _ = write!(self.out, " transform=\"matrix(-1 0 0 1 {} 0)\"", Num(2.0 * r.x + r.w));
        }
        let _ = writeln!(self.out, " xlink:href=\"{}\"/></g>", escape(&im.image.href));
    }

    fn balloon(&mut self, b: &Balloon) {
        let s = &b.style;
        let stroke = Rgba::BLACK.hex();
        let fill = Rgba::WHITE.hex();
        self.out.push_str("<g class=\"balloon\">");
        let [p0, p1, tip] = b.tail;
        let _ = write!(
            self.out,
            "<path d=\"M {} {} L {} {} L {} {} Z\" fill=\"{fill}\" stroke=\"{stroke}\" stroke-width=\"{}\" stroke-linejoin=\"round\"/>",
            Num(p0.0),
            Num(p0.1),
            Num(tip.0),
            Num(tip.1),
            Num(p1.0),
            Num(p1.1),
            Num(s.stroke_width)
        );
        let r = &b.rect;
        let _ = write!(
            self.out,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" rx=\"{}\" ry=\"{}\" fill=\"{fill}\" stroke=\"{stroke}\" stroke-width=\"{}\"/>",
            Num(r.x),
            Num(r.y),
            Num(r.w),
            Num(r.h),
            Num(s.corner_radius),
            Num(s.corner_radius),
            Num(s.stroke_width)
        );
        for (x, y, line) in b.line_origins() {
            let _ = write!(
                self.out,
                "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"{}\" fill=\"{stroke}\">{}</text>",
                Num(x),
                Num(y + 0.8 * b.font_size),
                Num(b.font_size),
                escape(line)
            );
        }
        self.out.push_str("</g>\n");
    }

    fn outline(&mut self, rect: &Rect, width: f64) {
        let half = width / 2.0;
        let _ = writeln!(
            self.out,
            "<rect class=\"frame\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"{}\"/>",
            Num(rect.x + half),
            Num(rect.y + half),
            Num((rect.w - width).max(0.0)),
            Num((rect.h - width).max(0.0)),
            Num(width)
        );
    }
}
