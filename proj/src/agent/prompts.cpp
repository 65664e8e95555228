#include "gobrowse/agent/prompts.hpp"

namespace gobrowse::agent {

namespace {

constexpr const char* kInstructions =
    "You are a UI Assistant, your goal is to help the user perform tasks using a web browser. "
    "Review the instructions from the user, the current state of the page and all other "
    "information to find the best possible next action to accomplish your goal. Your answer "
    "will be interpreted and executed by a program, make sure to follow the formatting "
    "instructions.";

constexpr const char* kExamplesHeader =
    "Here are examples of actions with chain-of-thought reasoning:";

constexpr const char* kExamples =
    "{\"thought\": \"I now need to click on the Submit button to send the form. I will use the "
    "click action on the button, which has bid 12.\", \"action\": \"click('12')\"}\n"
    "{\"thought\": \"I found the information requested by the user, I will send it to the "
    "chat.\", \"action\": \"send_msg_to_user('The price for a 15 inch laptop is 1499 USD.')\"}\n"
    "{\"thought\": \"I have finished navigating to the Products page. I will inform the user "
    "that I have completed the task.\", \"action\": \"send_msg_to_user('I have finished "
    "navigating to the Products page.')\"}";

constexpr const char* kNextAction =
    "You will now think step by step and produce your next best action. Reflect on your past "
    "actions, any resulting error message, the current state of the page before deciding on "
    "your next action. Provide your output as a single json with a thought and an action. All "
    "reasoning must be contained within the thought key of the json output, and only a single "
    "action must be provided for the action key. Future actions will be taken subsequently. If "
    "you have finished performing the request, send a message to the user in a concise and to "
    "the point manner.";

}  // namespace

std::string build_prompt(const simenv::Observation& obs, const std::string& action_space_doc) {
  std::string out;
  out += "# Instructions\n";
  out += kInstructions;
  out += "\n\n# Goal\n";
  out += obs.goal;
  out += "\n\n# Action Space\n";
  out += action_space_doc;
  out += "\n";
  out += kExamplesHeader;
  out += "\n";
  out += kExamples;
  out += "\n\n# Current Accessibility Tree\n";
  out += obs.axtree;
  out += "\n\n# Error Message from Last Action\n";
  out += obs.last_action_error ? *obs.last_action_error : std::string("None");
  out += "\n\n# History of Past Actions\n";
  for (const auto& line : obs.action_history) {
    out += line;
    out += "\n";
  }
  out += "\n# Next Action\n";
  out += kNextAction;
  out += "\n";
  return out;
}

const std::string& nav_explorer_goal() {
  static const std::string text =
      "I am trying to collect a dataset to train a better web browser agent that can perform "
      "actions for users in a web browser. For this, we are particularly interested to collect "
      "**navigation tasks** that are feasible to perform from the current web page.\n"
      "Navigation tasks are tasks requiring navigating to a specific page.\n"
      "\n"
      "Collect navigation tasks that require navigating to another webpage from this current "
      "page. You may click on links to try finding other interesting pages to collect tasks "
      "from. But if you do navigate to another page, instead of collecting tasks on that page, "
      "make sure to navigate back to the previous page using `go_back` or `goto`. We will "
      "collect tasks from these new pages later. When collecting navigation tasks, prioritize "
      "those that would likely have interesting/useful tasks on them over ones that likely "
      "won't give many useful tasks to collect.\n"
      "\n"
      "As you are exploring, you can add navigation tasks to the dataset using the "
      "`add_tasks_to_dataset` function.\n"
      "\n"
      "When you are done exploring the current page, send a message to the user using "
      "`send_msg_to_user` confirming this.\n"
      "\n"
      "Be sure to prioritize adding navigation tasks to pages that a typical user of this web "
      "page would most often want to navigate to, over niche pages that the typical user would "
      "rarely frequent.\n"
      "\n"
      "**Important**\n"
      "Remember that if you are successful at navigating to a new page, you should add a "
      "corresponding task to the dataset as your next action before finding new pages.";
  return text;
}

const std::string& page_explorer_goal() {
  static const std::string text =
      "I am trying to collect a dataset to train a better web browser agent that can perform "
      "actions for users in a web browser. For this, I need to first collect tasks that are "
      "feasible to perform on the current web page. The tasks should be concrete (e.g., on an "
      "amazon product page for product X, an appropriate task could be \"Leave a positive "
      "review for X\" or on a maps website a task could be \"Show me driving directions from X "
      "to Y.\" where X and Y are specific locations).\n"
      "You may explore by performing actions on this web page if that helps to determine "
      "concrete tasks that are feasible.\n"
      "\n"
      "Find the tasks that are possible to perform on the current web page itself, without "
      "have to navigate to other links/urls. Though, you may find it helpful to navigate "
      "through menus on this page to get a better idea of what types of tasks are feasible. "
      "If you accidentally go to a new url while trying to navigate items on the page, you "
      "can go back to the previous page using the `go_back` function.\n"
      "\n"
      "Tasks are usually of three types:\n"
      "1. Information seeking: The user wants to obtain certain information from the webpage, "
      "such as the information of a product, reviews, map info, comparison of map routes, "
      "etc.\n"
      "2. Site navigation: The user wants to navigate to a specific page.\n"
      "3. Content modification: The user wants to modify the content of a webpage or "
      "configuration.\n"
      "\n"
      "Be as specific as you can while creating tasks. The web agent may start from a "
      "different web page when asked to complete the task and so may not have the current "
      "page context to understand the task. So, for example, avoid creating generic tasks "
      "like \"Add item to cart\" or \"Print receipt for this order.\" Instead you want to "
      "create specific tasks like \"Add a Sony PS5 to cart\" or \"Print a receipt for Martha "
      "Jone's order of the Nike Velocity Sweatpants from May 21, 2021\"\n"
      "\n"
      "I recommend the following order to collecting tasks:\n"
      "1. First look for information seeking/extraction tasks that can be answered simply "
      "using information on the current page, requiring no additional actions.\n"
      "2. Collect navigation tasks that require navigating to another webpage from this "
      "current page. You may click to links to try finding other interesting pages to collect "
      "tasks from. But if you do navigate to another page, instead of collecting tasks on "
      "that page, make sure to navigate back to the previous page using `go_back`. We will "
      "collect tasks from these new pages later. When collecting navigation tasks, prioritize "
      "those that would likely have interesting/useful tasks on them over ones that likely "
      "won't give many useful tasks to collect.\n"
      "3. Finally, you can try to find content modification tasks on the current page that "
      "require performing actions on the current page itself.\n"
      "\n"
      "As you are exploring the page, you may find it helpful to click on buttons, links, and "
      "other elements on the page to see if they reveal any additional information or options "
      "that could lead to new tasks. You can also hover over elements to see if they provide "
      "any tooltips or additional context.\n"
      "\n"
      "**Important**:\n"
      "When collecting tasks, focus more on the common tasks that a typical user of this "
      "webpage would want to perform. Avoid niche tasks that are unlikely to be relevant to "
      "the typical user of this website.\n"
      "For most common styles of tasks, it may be useful to include a few variants or related "
      "tasks to help the web agent learn frequently used skills.\n"
      "\n"
      "As you are exploring, you can add tasks to the dataset using the "
      "`add_tasks_to_dataset` function.\n"
      "\n"
      "When you are done exploring, send a message to the user using `send_msg_to_user` "
      "confirming this.";
  return text;
}

}  // namespace gobrowse::agent
