"""Regenerates data/lexicon.tsv (surface, POS, lemma) for the baseline tagger.

Usage: python3 tools/gen_lexicon.py [OUT]
"""
import os
import re
import sys

OUT = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "..", "data", "lexicon.tsv")
rows = []
seen = set()
def add(surface, pos, lemma):
    key = (surface, pos, lemma)
    if key in seen: return
    seen.add(key); rows.append(key)

IRREG = """
be am is are was were been being
have has had had having
do does did done doing
say says said said saying
go goes went gone going
get gets got gotten getting
make makes made made making
know knows knew known knowing
think thinks thought thought thinking
take takes took taken taking
see sees saw seen seeing
come comes came come coming
give gives gave given giving
find finds found found finding
tell tells told told telling
become becomes became become becoming
leave leaves left left leaving
feel feels felt felt feeling
bring brings brought brought bringing
begin begins began begun beginning
keep keeps kept kept keeping
hold holds held held holding
write writes wrote written writing
stand stands stood stood standing
hear hears heard heard hearing
let lets let let letting
mean means meant meant meaning
set sets set set setting
meet meets met met meeting
run runs ran run running
pay pays paid paid paying
sit sits sat sat sitting
speak speaks spoke spoken speaking
lie lies lied lied lying
lead leads led led leading
read reads read read reading
grow grows grew grown growing
lose loses lost lost losing
fall falls fell fallen falling
send sends sent sent sending
build builds built built building
understand understands understood understood understanding
draw draws drew drawn drawing
break breaks broke broken breaking
spend spends spent spent spending
cut cuts cut cut cutting
rise rises rose risen rising
drive drives drove driven driving
buy buys bought bought buying
wear wears wore worn wearing
choose chooses chose chosen choosing
seek seeks sought sought seeking
throw throws threw thrown throwing
catch catches caught caught catching
deal deals dealt dealt dealing
win wins won won winning
forget forgets forgot forgotten forgetting
steal steals stole stolen stealing
fight fights fought fought fighting
hide hides hid hidden hiding
beat beats beat beaten beating
shoot shoots shot shot shooting
sell sells sold sold selling
teach teaches taught taught teaching
fly flies flew flown flying
swear swears swore sworn swearing
sing sings sang sung singing
sleep sleeps slept slept sleeping
shake shakes shook shaken shaking
hang hangs hung hung hanging
blow blows blew blown blowing
freeze freezes froze frozen freezing
eat eats ate eaten eating
drink drinks drank drunk drinking
put puts put put putting
hit hits hit hit hitting
hurt hurts hurt hurt hurting
quit quits quit quit quitting
spread spreads spread spread spreading
bet bets bet bet betting
bite bites bit bitten biting
hide hides hid hidden hiding
feed feeds fed fed feeding
flee flees fled fled fleeing
bleed bleeds bled bled bleeding
ride rides rode ridden riding
wake wakes woke woken waking
"""
# verbs whose final consonant doubles before -ed/-ing
DOUBLE = set("kid stop ban plan rob rig drop grab slam ship shop chat admit commit control omit regret ditch".split()) - {"ditch"}
REGULAR = """
want use work call try ask need seem help show play move live believe happen provide include continue change watch follow
create open walk offer remember love consider appear wait serve die expect stay kill report decide pull
return explain hope develop carry agree support hit produce raise pass
accept attack defend blame ignore destroy save deny praise fear push censor cheat threaten mock expose hate
ruin rig vote count interrupt debate answer question attend tweet post share like retweet claim lie accuse
demand refuse protest march riot loot burn arrest investigate impeach elect nominate endorse campaign
fund tax cancel block ban trust doubt fix handle prove admit commit
shut silence label flag delete suspend report poll rally mail sign register
stop plan drop grab slam control regret
laugh cry scream yell shout joke smile pray worry 
murder cover cage kid hack leak bribe smear hurt trick fool
lock crash explode collapse surge spike rise
wonder learn listen talk mention explain remind warn promise admit apologize resign
respect deserve earn owe steal cheat
destroy dismantle defund abolish reform protect
""".split()
def s_form(v):
    if re.search(r'(s|x|z|ch|sh)$', v): return v+'es'
    if re.search(r'[^aeiou]y$', v): return v[:-1]+'ies'
    return v+'s'
def ed_form(v):
    if v.endswith('e'): return v+'d'
    if re.search(r'[^aeiou]y$', v): return v[:-1]+'ied'
    if v in DOUBLE: return v+v[-1]+'ed'
    return v+'ed'
def ing_form(v):
    if v.endswith('ie'): return v[:-2]+'ying'
    if v.endswith('e') and not v.endswith('ee'): return v[:-1]+'ing'
    if v in DOUBLE: return v+v[-1]+'ing'
    return v+'ing'

verb_rows = []
irreg_lemmas = set()
for line in IRREG.strip().splitlines():
    f = line.split()
    lemma = f[0]; irreg_lemmas.add(lemma)
    for form in f: verb_rows.append((form, lemma))
for v in REGULAR:
    if v in irreg_lemmas: continue
    for form in (v, s_form(v), ed_form(v), ing_form(v)):
        verb_rows.append((form, v))
# lie (recline) shares surface with lie (tell a lie); keep the folding the analysis relies on.

NOUNS = """
time year people way day man woman child world life hand part place case week company system program question
work government number night point home water room mother area money story fact month lot right study book eye job
word business issue side kind head house service friend father power hour game line end member law car city community
name president team minute idea kid body information back parent face others level office door health person art war
history party result change morning reason research girl guy moment air teacher force education boy
debate vote voter ballot election senate court mask virus economy border tax fly moderator mail poll rally answer
cage campaign candidate democrat republican liberal conservative country nation state vice policy plan deal
truth lie fraud news media fake video tweet post account bot troll narrative conspiracy hoax scandal
crime police riot protest fire job jobs covid pandemic vaccine doctor hospital china russia
immigration immigrant wall family families kids child children school student
debt deficit stock market price oil energy climate fracking gas coal
judge justice supreme nominee seat term speech statement claim record
interview host anchor network reporter journalist headline
winner loser leader dictator king puppet clown liar cheater criminal
count result results majority minority margin lead swing turnout
inflation recession bailout stimulus check
dog cat bird head hair eye
h1n1 ebola flu
""".split()
IRREG_PLURAL = {"man":"men","woman":"women","child":"children","person":"people","foot":"feet","kid":"kids"}
def plural(n):
    if n in IRREG_PLURAL: return IRREG_PLURAL[n]
    if re.search(r'(s|x|z|ch|sh)$', n): return n+'es'
    if re.search(r'[^aeiou]y$', n): return n[:-1]+'ies'
    return n+'s'
noun_rows = []
for n in NOUNS:
    if n in ("jobs","families","children","results","kids","people","others"):
        continue
    noun_rows.append((n, n))
    p = plural(n)
    if p != n: noun_rows.append((p, n))
noun_rows.append(("people","people"))
noun_rows.append(("others","other"))

PROPN = """
trump donald pence mike harris kamala biden joe obama hillary clinton barack melania ivanka hunter
america usa us twitter facebook fox cnn msnbc texas florida pennsylvania georgia arizona michigan wisconsin
china russia ukraine iran mexico washington congress gop dnc rnc potus flotus scotus
""".split()
propn_rows = [(p, p) for p in PROPN]

OTHER = """
a an the this that these those my your his her its our their me him them us i you he she it we they myself yourself
himself herself itself ourselves themselves mine yours hers ours theirs who whom whose which what where when why how
and or but nor so yet for of in on at by to from with about as into like through after over between out against
during without before under around among up down off above below near than then there here
not no yes very too also just only even still again ever never always often sometimes soon now already
will would shall should can could may might must ought
am is are was were be been being
all any both each few more most other some such own same many much several
one two three four five six seven eight nine ten hundred thousand million billion first second third last next
good bad great big small new old high low long short little large young important different real true false
best better worse worst sure right wrong full free hard easy strong weak clear open whole
huge terrible horrible amazing awesome crazy stupid dumb smart weird sad happy angry mad nice beautiful ugly
political democratic presidential vice federal national american economic social public private
wow omg lol lmao yeah yep nope ok okay oh hey hi please thanks thank
tonight today tomorrow yesterday
if whether unless because while though although until
anything everything something nothing anyone everyone someone nobody everybody somebody anybody
anywhere everywhere somewhere nowhere
really actually literally basically totally absolutely definitely probably maybe perhaps
""".split()
other_rows = [(w, w) for w in OTHER]
# contractions
for c in ["i'm","you're","he's","she's","it's","we're","they're","i've","you've","we've","they've","i'll","you'll",
          "he'll","she'll","we'll","they'll","i'd","you'd","he'd","she'd","we'd","they'd","don't","doesn't","didn't",
          "can't","won't","isn't","aren't","wasn't","weren't","shouldn't","wouldn't","couldn't","haven't","hasn't",
          "hadn't","that's","there's","what's","let's","who's","ain't"]:
    other_rows.append((c, c))

# Order: ambiguous words get the reading listed first as default.
VERB_FIRST = set("lie lies lied lying vote votes voted voting attack attacks attacked cheat cheats cheated "
                 "win wins won winning lose build builds built fight fights count counts counted claim claims "
                 "censor post posts tweet tweets support supports protest protests debate debates".split())
NOUN_FIRST = set("fly flies question questions answer answers cage cages mail poll polls rally rallies plan plans "
                 "deal deals change changes work time lead mask masks fire record result results tax taxes "
                 "check checks help hope riot riots trust doubt report reports fund funds ban bans".split())
by_surface = {}
for s,l in verb_rows: by_surface.setdefault(s, []).append(("VERB", l))
for s,l in noun_rows: by_surface.setdefault(s, []).append(("NOUN", l))
for s,l in propn_rows: by_surface.setdefault(s, []).append(("PROPN", l))
for s,l in other_rows: by_surface.setdefault(s, []).append(("OTHER", l))
out = []
for s in sorted(by_surface):
    readings = []
    for r in by_surface[s]:
        if r not in readings: readings.append(r)
    # function-word reading wins for words like "us", "will", "can", "right"
    def rank(r):
        if r[0] == "OTHER": return 0
        if s in VERB_FIRST: return {"VERB":1,"NOUN":2,"PROPN":3}[r[0]]
        if s in NOUN_FIRST: return {"NOUN":1,"VERB":2,"PROPN":3}[r[0]]
        return {"PROPN":1,"NOUN":2,"VERB":3}[r[0]] if r[0]=="PROPN" else {"VERB":2,"NOUN":1}[r[0]]
    readings.sort(key=rank)
    for pos, l in readings:
        out.append(f"{s}\t{pos}\t{l}")
open(OUT,'w').write("\n".join(out)+"\n")
print(len(out))
