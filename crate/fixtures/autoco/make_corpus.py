#!/usr/bin/env python3
"""Writes the AutoCo fixture corpus (HTML files + index.tsv).

AutoCo is a fictional carmaker with a .com hub, country sites under
ccTLDs, an Italian section under /it-it/ on the hub, and a shop subdomain.
E-mobility pages sit next to the hub and are linked from every navigation
bar. Re-running this script reproduces the committed corpus byte for byte.
"""

import html
import os
import shutil
import urllib.parse

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "corpus")

COM = "https://www.autoco.com"
NAV = [f"{COM}/", f"{COM}/e-mobility/", f"{COM}/e-mobility/battery", f"{COM}/models/"]

# url -> (title, paragraphs, links)
PAGES = {}


def page(url, title, paragraphs, links, nav=True):
    links = list(links)
    if nav:
        links = NAV + links
    PAGES[url] = (title, paragraphs, links)


page(
    f"{COM}/",
    "AutoCo Global",
    [
        "Welcome to AutoCo. Discover our new electric and hybrid range, built for a cleaner environment.",
        "Explore connectivity services, autonomous driving research and our model line-up.",
    ],
    [
        f"{COM}/#top",
        f"{COM}/e-mobility/charging",
        f"{COM}/connect/",
        f"{COM}/autonomous/",
        f"{COM}/about/",
        f"{COM}/it-it/",
        "https://shop.autoco.com/",
        "https://www.autoco.jp/",
        "https://www.autoco.de/",
        "https://www.autoco.fr/",
        "https://www.autoco.co.uk/",
        "https://www.autoco.ca/",
        "https://www.autoco.nl/",
        "https://www.autoco.ie/",
        "https://www.autoco.ch/",
        "https://twitter.com/autoco",
        "mailto:press@autoco.com",
    ],
)
page(
    f"{COM}/e-mobility/",
    "E-Mobility",
    [
        "E-mobility at AutoCo means electric drive, a long range battery and eco charging at home.",
        "Our hybrid and electric cars are excellent for the environment and a great choice for families.",
    ],
    [f"{COM}/e-mobility/charging", f"{COM}/e-mobility/battery#cells"],
)
page(
    f"{COM}/e-mobility/battery",
    "Battery technology",
    [
        "Our battery cells are reliable and safe. Every electric battery pack is recycled with an ecological process.",
        "Battery warranty: eight years of peace of mind.",
    ],
    [f"{COM}/e-mobility/"],
)
page(
    f"{COM}/e-mobility/charging",
    "Charging",
    [
        "Charging an electric car is easy and convenient. Eco charging uses green electricity.",
        "The battery is never a problem on long trips.",
    ],
    [f"{COM}/e-mobility/", "https://www.chargemap.example.org/"],
)
page(
    f"{COM}/connect/",
    "AutoCo Connect",
    [
        "Connectivity on the road: wifi hotspot, cloud services and 5g updates.",
        "Car sharing and shared mobility plans make mobility simple and flexible.",
    ],
    [f"{COM}/autonomous/"],
)
page(
    f"{COM}/autonomous/",
    "Autonomous driving",
    [
        "Autonomous driving research uses machine learning and artificial intelligence.",
        "An intelligent algorithm keeps the self-driving prototype safe, though the technology is not perfect yet.",
    ],
    [f"{COM}/connect/"],
)
page(
    f"{COM}/models/",
    "Models",
    [
        "Choose your model. Compare the sedan and the suv side by side.",
        "Every model comes with a comfortable interior and a quiet cabin.",
    ],
    [f"{COM}/models/?model=sedan", f"{COM}/models/?model=suv", f"{COM}/models/?model=sedan#specs"],
)
page(
    f"{COM}/models/?model=sedan",
    "Sedan",
    ["The sedan is elegant, spacious and comfortable. A hybrid version is available."],
    [f"{COM}/models/?model=suv"],
)
page(
    f"{COM}/models/?model=suv",
    "SUV",
    ["The suv is rugged and powerful with a spacious boot for the whole family."],
    [f"{COM}/models/?model=sedan"],
)
page(
    f"{COM}/about/",
    "About AutoCo",
    [
        "AutoCo was founded in 1950. Read our history or download the company brochure.",
        "We are proud of our friendly dealers and loyal customers.",
    ],
    [f"{COM}/about/history", f"{COM}/about/brochure.pdf", f"{COM}/about/careers"],
)
page(
    f"{COM}/about/history",
    "History",
    ["From a small workshop to a global brand: a wonderful story of growth."],
    [f"{COM}/about/history/1950s"],
)
page(
    f"{COM}/about/history/1950s",
    "The 1950s",
    ["The first AutoCo car was slow and noisy, but customers loved it."],
    [f"{COM}/about/history", f"{COM}/about/history/1950s/photos"],
    nav=False,
)
page(
    f"{COM}/it-it/",
    "AutoCo Italia",
    ["Benvenuti. Scopri la gamma electric e hybrid di AutoCo in Italia."],
    [f"{COM}/it-it/elettrica", "https://www.autoco.com/"],
    nav=False,
)
page(
    f"{COM}/it-it/elettrica",
    "Elettrica",
    ["La nuova electric city car con battery da 50 kWh. Eco e silenziosa."],
    [f"{COM}/it-it/", f"{COM}/e-mobility/"],
    nav=False,
)
page(
    "https://shop.autoco.com/",
    "AutoCo Shop",
    ["Buy accessories and merchandise. Financing offers are available through our partner bank."],
    ["https://www.example-bank.com/finance", f"{COM}/"],
    nav=False,
)


def country(cc_host, home_title, home_text, subpages):
    base = f"https://{cc_host}"
    sub_urls = [f"{base}{path}" for path, _, _, _ in subpages]
    page(
        f"{base}/",
        home_title,
        home_text,
        sub_urls + [f"{COM}/", f"{COM}/e-mobility/"],
        nav=False,
    )
    for path, title, text, extra in subpages:
        page(f"{base}{path}", title, text, [f"{base}/"] + extra, nav=False)


country(
    "www.autoco.jp",
    "AutoCo Japan",
    ["AutoCo Japan home page. Our electric kei car and hybrid models are popular in Japan."],
    [
        ("/ev", "EV", ["Electric vehicles with a compact battery and eco mode for the city."], [f"{COM}/e-mobility/battery"]),
        ("/news", "News", ["Latest news: a new dealer opened in Osaka. Customers are happy."], []),
        ("/dealers", "Dealers", ["Find a dealer near you."], []),
    ],
)
country(
    "www.autoco.de",
    "AutoCo Deutschland",
    ["Willkommen bei AutoCo Deutschland. Entdecken Sie unsere electric und hybrid Modelle."],
    [
        ("/elektro", "Elektro", ["Electric mobility with battery leasing. Eco tariffs for charging."], [f"{COM}/e-mobility/charging"]),
        ("/konnektivitaet", "Konnektivitaet", ["Connectivity with wifi and cloud services in every car."], [f"{COM}/connect/"]),
        ("/haendler", "Haendler", ["Unsere Haendler in Berlin und Hamburg."], ["https://www.autoco.de/haendler/berlin"]),
    ],
)
page(
    "https://www.autoco.de/haendler/berlin",
    "Berlin",
    ["AutoCo Berlin: friendly service and a good workshop."],
    ["https://www.autoco.de/haendler", "https://www.autoco.de/haendler/berlin/karte"],
    nav=False,
)
country(
    "www.autoco.fr",
    "AutoCo France",
    ["Bienvenue chez AutoCo France. Decouvrez nos voitures electric et hybrid."],
    [
        ("/electrique", "Electrique", ["Electric and eco: the battery is guaranteed for eight years."], []),
        ("/concessionnaires", "Concessionnaires", ["Trouvez un concessionnaire pres de chez vous."], []),
    ],
)
country(
    "www.autoco.co.uk",
    "AutoCo UK",
    ["Welcome to AutoCo UK. Great deals on our hybrid range this spring."],
    [
        ("/electric", "Electric", ["Our electric cars are brilliant. Battery range is impressive and eco friendly."], []),
        ("/self-driving", "Self-driving", ["Self-driving trials in London use an autonomous shuttle and ai safety systems."], [f"{COM}/autonomous/"]),
    ],
)
country(
    "www.autoco.ca",
    "AutoCo Canada",
    ["AutoCo Canada. Choose your language."],
    [
        ("/en", "English", ["Winter ready cars with reliable heating. Hybrid models available across Canada."], []),
        ("/fr", "Francais", ["Des voitures pretes pour l'hiver."], []),
    ],
)
country("www.autoco.nl", "AutoCo Nederland", ["Welkom bij AutoCo. Electric rijden is simple."], [])
country("www.autoco.ie", "AutoCo Ireland", ["AutoCo Ireland. Visit a dealer for a test drive."], [])
country(
    "www.autoco.ch",
    "AutoCo Schweiz",
    ["AutoCo in der Schweiz. Hybrid und electric."],
    [("/modelle", "Modelle", ["Alle Modelle im Ueberblick."], [])],
)

# Non-HTML and missing documents.
BINARY = {f"{COM}/about/brochure.pdf": ("about/brochure.pdf", b"%PDF-1.4\n% AutoCo brochure placeholder\n%%EOF\n")}


def file_name(url):
    rest = url.split("://", 1)[1]
    rest = rest.replace("?", "_q_").replace("=", "-")
    if rest.endswith("/"):
        rest += "index"
    return rest + ".html"


def href_for(page_url, link):
    """Same-host links are written root-relative."""
    parts = urllib.parse.urlsplit(link)
    if parts.scheme in ("http", "https") and parts.netloc == urllib.parse.urlsplit(page_url).netloc:
        return urllib.parse.urlunsplit(("", "", parts.path, parts.query, parts.fragment))
    return link


def render(url, title, paragraphs, links):
    out = [
        "<!DOCTYPE html>",
        "<html>",
        "<head>",
        f"<title>{html.escape(title)}</title>",
        "<style>body { font-family: sans-serif; }</style>",
        "<script>var analytics = 'battery electric hybrid tracking';</script>",
        "</head>",
        "<body>",
        "<nav>",
    ]
    for i, href in enumerate(links):
        out.append(f'<a href="{html.escape(href_for(url, href))}">link {i}</a>')
    out.append("</nav>")
    out.append(f"<h1>{html.escape(title)}</h1>")
    for p in paragraphs:
        out.append(f"<p>{html.escape(p)}</p>")
    out.append("</body>")
    out.append("</html>")
    return "\n".join(out) + "\n"


def main():
    if os.path.isdir(OUT):
        shutil.rmtree(OUT)
    os.makedirs(OUT)
    index = ["# AutoCo fixture corpus: canonical-url<TAB>file"]
    for url in sorted(PAGES):
        title, paragraphs, links = PAGES[url]
        name = file_name(url)
        path = os.path.join(OUT, name)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(render(url, title, paragraphs, links))
        index.append(f"{url}\t{name}")
    for url, (name, body) in sorted(BINARY.items()):
        path = os.path.join(OUT, name)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, "wb") as f:
            f.write(body)
        index.append(f"{url}\t{name}")
    with open(os.path.join(OUT, "index.tsv"), "w", encoding="utf-8") as f:
        f.write("\n".join(index) + "\n")
    print(f"{len(index) - 1} documents")


if __name__ == "__main__":
    main()
